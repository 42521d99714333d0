"""Entropic and logarithmic functionals of L_{n-1}^(1).

The q-th entropic functional

    I_q(n) = int_0^inf t^{2q} e^{-qt} [L_{n-1}^(1)(t)]^{2q} dt

is available by three exact routes: expanding the polynomial power and
integrating termwise (:func:`iq_poly_expansion`, the production path),
the terminating Lauricella multi-sum obtained from the Srivastava-Niukkanen
linearization (:func:`iq_lauricella`, exponential in q, reference only),
and the finite single sum for n = 2 (:func:`iq_closed_n2`).  A quadrature
route (:func:`iq_quadrature`) also accepts real q.

The logarithmic functional E_1 has no closed form for general n and is
computed by composite quadrature split at the zeros of L_{n-1}^(1).
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import CapacityError, InvalidInputError
from .laguerre_core import (RationalPoly, integrate_poly_exp, laguerre_log_abs, laguerre_poly, pochhammer,
                            poly_pow)
from .quadrature import DEFAULT_ATOL, DEFAULT_RTOL, integrate_semiinfinite, laguerre_zero_plan

DEGREE_CAP = 4000
TERM_CAP = 10**7
E1_MAX_N = 150

METHODS = ("lauricella_sum", "poly_expansion", "quadrature", "closed_form_n1", "closed_form_n2",
           "disequilibrium_sum")


@dataclass(frozen=True)
class MomentResult:
    """An entropic functional or moment.

    ``exact`` is the Z-stripped rational coefficient when an exact route
    was used; the physical value is ``exact * Z**z_power``, which ``approx``
    holds in floating point.
    """

    n: int
    q: float
    method: str
    approx: float
    exact: Optional[Fraction] = None
    z_power: float = 0.0
    error: float = 0.0

    def __float__(self):
        return self.approx


@dataclass(frozen=True)
class ThetaCoefficient:
    k: int
    value: Fraction
    q: int
    n: int


def _check_nq(n, q):
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer (n >= 1), got {n!r}")
    if int(q) != q or q < 1:
        raise InvalidInputError(f"exact routes need a positive integer q, got {q!r}")
    return int(n), int(q)


def _exact_result(n, q, method, value):
    return MomentResult(n=n, q=q, method=method, approx=float(value), exact=value)


@lru_cache(maxsize=1024)
def _iq_expansion_value(n, q):
    power = poly_pow(laguerre_poly(n - 1, 1), 2 * q)
    return integrate_poly_exp(power, q, 2 * q)


def iq_poly_expansion(n: int, q: int, degree_cap: int = DEGREE_CAP) -> MomentResult:
    """I_q(n) exactly, via the expanded power [L_{n-1}^(1)]^{2q}."""
    n, q = _check_nq(n, q)
    degree = 2 * q * (n - 1)
    if degree > degree_cap:
        raise CapacityError(f"polynomial degree {degree} exceeds the degree cap {degree_cap}", cap=degree_cap)
    return _exact_result(n, q, "poly_expansion", _iq_expansion_value(n, q))


def _index_weight(n, q, m):
    # (-n+1)_m / ((2)_m m! q^m)
    return pochhammer(1 - n, m) / (pochhammer(2, m) * math.factorial(m) * Fraction(q) ** m)


@lru_cache(maxsize=256)
def _multisum_by_total(n, q):
    """Group the 2q-fold multi-sum by M = m_1 + ... + m_2q.

    Returns {M: sum over index tuples with that total of prod_i a(m_i)}.
    Tuples are enumerated as multisets, each weighted by its number of
    orderings, which is the same sum term for term.
    """
    r = 2 * q
    a = [_index_weight(n, q, m) for m in range(n)]
    perms_r = math.factorial(r)
    totals: dict[int, Fraction] = {}
    for combo in itertools.combinations_with_replacement(range(n), r):
        mult = perms_r
        for c in Counter(combo).values():
            mult //= math.factorial(c)
        term = Fraction(mult)
        for m in combo:
            term *= a[m]
        key = sum(combo)
        totals[key] = totals.get(key, Fraction(0)) + term
    return totals


def _check_terms(n, q, term_cap):
    terms = n ** (2 * q)
    if terms > term_cap:
        raise CapacityError(f"Lauricella sum has n^(2q) = {terms} terms, above the term cap {term_cap}",
                            cap=term_cap)


def iq_lauricella(n: int, q: int, term_cap: int = TERM_CAP) -> MomentResult:
    """I_q(n) from the terminating Lauricella F_A^(2q+1) multi-sum.

    I_q = (2q)! n^{2q} / q^{2q+1} * sum_{m_1..m_2q} (2q+1)_{sum m}
          prod_i (1-n)_{m_i} / ((2)_{m_i} m_i! q^{m_i})
    """
    n, q = _check_nq(n, q)
    _check_terms(n, q, term_cap)
    total = sum((pochhammer(2 * q + 1, big_m) * w for big_m, w in _multisum_by_total(n, q).items()),
                Fraction(0))
    value = Fraction(math.factorial(2 * q) * n ** (2 * q), q ** (2 * q + 1)) * total
    return _exact_result(n, q, "lauricella_sum", value)


def iq_closed_n1(q: int) -> MomentResult:
    """I_q(1) = (2q)! / q^{2q+1}."""
    _, q = _check_nq(1, q)
    return _exact_result(1, q, "closed_form_n1", Fraction(math.factorial(2 * q), q ** (2 * q + 1)))


def iq_closed_n2(q: int) -> MomentResult:
    """I_q(2) from its finite single sum over j = 0..2q."""
    _, q = _check_nq(2, q)
    s = sum((Fraction(math.comb(2 * q, j) * pochhammer(2 * q + 1, j) * (-1) ** j, 2**j * q**j)
             for j in range(2 * q + 1)), Fraction(0))
    value = Fraction(math.factorial(2 * q) * 2 ** (2 * q), q ** (2 * q + 1)) * s
    return _exact_result(2, q, "closed_form_n2", value)


def theta_coefficients(n: int, q: int, k_max: Optional[int] = None,
                       term_cap: int = TERM_CAP) -> list[ThetaCoefficient]:
    """Linearization coefficients theta_k, k = 0..k_max.

    (qt)^{2q} [L_{n-1}^(1)(t)]^{2q} = sum_k theta_k L_k^(0)(qt), with
    theta_k = (2q)! n^{2q} F_A^(2q+1)(2q+1, 1-n, ..., 1-n, -k; 2, ..., 2, 1; 1/q, ..., 1/q, 1).
    The left side has degree 2qn, so theta_k vanishes beyond that; the
    default ``k_max`` is 2qn.
    """
    n, q = _check_nq(n, q)
    _check_terms(n, q, term_cap)
    if k_max is None:
        k_max = 2 * q * n
    if int(k_max) != k_max or k_max < 0:
        raise InvalidInputError("k_max must be a nonnegative integer")
    grouped = _multisum_by_total(n, q)
    prefactor = math.factorial(2 * q) * n ** (2 * q)
    out = []
    for k in range(int(k_max) + 1):
        total = Fraction(0)
        for big_m, w in grouped.items():
            # last Lauricella index runs over j with (-k)_j / ((1)_j j!), argument 1
            inner = sum((pochhammer(2 * q + 1, big_m + j) * pochhammer(-k, j)
                         / (math.factorial(j) ** 2) for j in range(k + 1)), Fraction(0))
            total += w * inner
        out.append(ThetaCoefficient(k=k, value=prefactor * total, q=q, n=n))
    return out


def theta_series_poly(thetas: list[ThetaCoefficient]) -> RationalPoly:
    """Sum_k theta_k L_k^(0)(q t) as an exact polynomial in t."""
    acc = RationalPoly((0,))
    for th in thetas:
        acc = acc + laguerre_poly(th.k, 0).scale_argument(th.q) * th.value
    return acc


# -- quadrature routes ---------------------------------------------------

def _log_abs_l(n, t):
    return laguerre_log_abs(n - 1, 1, t)


def iq_quadrature(n: int, q: float, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                  panel_order: int = 64) -> MomentResult:
    """I_q(n) by composite quadrature; q may be any positive real."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer (n >= 1), got {n!r}")
    if not q > 0:
        raise InvalidInputError(f"q must be positive, got {q!r}")
    n, q = int(n), float(q)

    def integrand(t):
        log_l, sign = _log_abs_l(n, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_f = q * (2.0 * np.log(t) - t + 2.0 * log_l)
            out = np.exp(log_f)
        return np.where(sign == 0, 0.0, out)

    plan = laguerre_zero_plan(n - 1, 1, n=n, panel_order=panel_order, tail_rate=q,
                              max_panel_width=8.0 / max(q, 1.0))
    res = integrate_semiinfinite(integrand, plan, rtol=rtol, atol=atol)
    return MomentResult(n=n, q=q, method="quadrature", approx=res.value, error=res.error)


def e1_integrand(n: int):
    """t^2 e^{-t} L^2 ln L^2 with L = L_{n-1}^(1); set to 0 at the zeros of L."""

    def integrand(t):
        log_l, sign = _log_abs_l(n, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(2.0 * np.log(t) - t + 2.0 * log_l) * (2.0 * log_l)
        return np.where(sign == 0, 0.0, out)

    return integrand


def e1_log_functional_with_error(n: int, rtol: float = 1e-9, panel_order: int = 64):
    """E_1(n) and its order-doubling error estimate."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer (n >= 1), got {n!r}")
    if n > E1_MAX_N:
        raise InvalidInputError(f"E_1 is supported for n <= {E1_MAX_N}, got {n}")
    n = int(n)
    if n == 1:
        return 0.0, 0.0
    plan = laguerre_zero_plan(n - 1, 1, n=n, panel_order=panel_order)
    res = integrate_semiinfinite(e1_integrand(n), plan, rtol=rtol, atol=DEFAULT_ATOL)
    return res.value, res.error


@lru_cache(maxsize=512)
def e1_log_functional(n: int) -> float:
    """E_1(n) = int_0^inf t^2 e^{-t} L^2 ln L^2 dt,  L = L_{n-1}^(1).

    Raises :class:`~coulomb_infolab.errors.ConvergenceError` if the
    order-doubling estimate exceeds 1e-9 relative.
    """
    return e1_log_functional_with_error(n)[0]


def e1_rydberg_asymptotic(n: int) -> float:
    """Large-n form 2 n^2 (3n - ln n - ln 2 pi)."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n!r}")
    return 2.0 * n * n * (3.0 * n - math.log(n) - math.log(2.0 * math.pi))
