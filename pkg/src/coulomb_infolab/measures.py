"""Information-theoretic measures of the half-line Coulomb states.

A state is the pair (n, Z); its position density is

    rho_n(x) = (Z / n^3) t^2 e^{-t} [L_{n-1}^(1)(t)]^2,   t = 2 Z x / n.

Entropic moments are W_q = Z^{q-1} / (2 n^{3q-1}) * I_q(n).  Integer q goes
through the exact routes of :mod:`entropic_functionals`; real q is
handled by quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import entropic_functionals as ef
from .errors import InvalidInputError
from .laguerre_core import binomial, digamma, laguerre_log_abs


@dataclass(frozen=True)
class QuantumState:
    """Stationary state with principal quantum number ``n`` and charge ``Z``."""

    n: int
    Z: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"n must be an integer with n >= 1, got {self.n!r}")
        if not (self.Z > 0 and math.isfinite(self.Z)):
            raise InvalidInputError(f"Z must be a positive real, got {self.Z!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def energy(self) -> float:
        return -self.Z**2 / self.n**2


def _is_integer(q) -> bool:
    return float(q).is_integer()


def _check_q(q, allow_one=True):
    if not q > 0:
        raise InvalidInputError(f"q must be positive, got {q!r}")
    if not allow_one and q == 1:
        raise InvalidInputError("q = 1 is the Shannon limit; use shannon_entropy instead")


def density(state: QuantumState, x):
    """rho_n(x); ``x`` may be an array.  Rejects x <= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidInputError("density is defined for x > 0")
    n, z = state.n, state.Z
    t = 2.0 * z * x / n
    log_l, sign = laguerre_log_abs(n - 1, 1, t)
    with np.errstate(divide="ignore"):
        out = np.exp(math.log(z / n**3) + 2.0 * np.log(t) - t + 2.0 * log_l)
    out = np.where(sign == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def entropic_moment(state: QuantumState, q, method: Optional[str] = None) -> ef.MomentResult:
    """W_q[rho_n] = int rho_n^q dx.

    ``method`` picks the route for I_q: ``poly_expansion`` (default for
    integer q), ``lauricella_sum``, ``closed_form_n1``/``closed_form_n2``
    or ``quadrature`` (default, and the only option, for non-integer q).
    """
    _check_q(q)
    n, z = state.n, state.Z
    if method is None:
        method = "poly_expansion" if _is_integer(q) else "quadrature"
    if method == "quadrature":
        iq = ef.iq_quadrature(n, float(q))
        value = iq.approx * z ** (q - 1) / (2.0 * n ** (3 * q - 1))
        return ef.MomentResult(n=n, q=float(q), method=method, approx=value, z_power=q - 1,
                               error=iq.error * value / iq.approx)
    if not _is_integer(q):
        raise InvalidInputError(f"method {method!r} requires integer q, got {q!r}")
    q = int(q)
    if method == "poly_expansion":
        iq = ef.iq_poly_expansion(n, q)
    elif method == "lauricella_sum":
        iq = ef.iq_lauricella(n, q)
    elif method == "closed_form_n1" and n == 1:
        iq = ef.iq_closed_n1(q)
    elif method == "closed_form_n2" and n == 2:
        iq = ef.iq_closed_n2(q)
    else:
        raise InvalidInputError(f"method {method!r} is not available for n={n}")
    exact = iq.exact / (2 * Fraction(n) ** (3 * q - 1))
    return ef.MomentResult(n=n, q=q, method=method, approx=float(exact) * z ** (q - 1), exact=exact,
                           z_power=q - 1)


def renyi_entropy(state: QuantumState, q) -> float:
    """R_q = ln(W_q) / (1 - q)."""
    _check_q(q, allow_one=False)
    w = entropic_moment(state, q)
    if w.exact is not None:
        # keep the Z dependence analytic: ln W = ln(exact) + (q-1) ln Z
        log_w = _log_fraction(w.exact) + (q - 1) * math.log(state.Z)
    else:
        log_w = math.log(w.approx)
    return log_w / (1.0 - q)


def tsallis_entropy(state: QuantumState, q) -> float:
    """T_q = (1 - W_q) / (q - 1)."""
    _check_q(q, allow_one=False)
    return (1.0 - entropic_moment(state, q).approx) / (q - 1.0)


@lru_cache(maxsize=None)
def disequilibrium_coefficient(n: int) -> Fraction:
    """D(n), with <rho_n> = Z D(n), from the single k-sum."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be an integer with n >= 1, got {n!r}")
    n = int(n)
    total = Fraction(0)
    for k in range(n):
        total += Fraction(binomial(2 * n - 2 * k - 2, n - k - 1) ** 2 * binomial(2 * k, k) ** 2
                          * (2 * k + 1) * (3 * n - 4 * k * (2 * k - 2 * n + 1)), n - k)
    return total / (2 ** (4 * n - 1) * n**3)


def disequilibrium(state: QuantumState) -> ef.MomentResult:
    """<rho_n> = W_2 = Z D(n), exact in its Z-stripped form."""
    d = disequilibrium_coefficient(state.n)
    return ef.MomentResult(n=state.n, q=2, method="disequilibrium_sum", approx=float(d) * state.Z, exact=d,
                           z_power=1)


def linear_entropy(state: QuantumState) -> float:
    return 1.0 - disequilibrium(state).approx


def _log_fraction(value: Fraction) -> float:
    # math.log accepts arbitrarily large ints; float(value) may overflow
    return math.log(value.numerator) - math.log(value.denominator)


def shannon_entropy(state: QuantumState) -> float:
    """S[rho_n] = 3n + 3 ln n - 2 psi(n) - 1/n - E_1(n) / (2 n^2) - 2 - ln Z."""
    n = state.n
    e1 = ef.e1_log_functional(n)
    return 3.0 * n + 3.0 * math.log(n) - 2.0 * digamma(n) - 1.0 / n - e1 / (2.0 * n * n) - 2.0 - math.log(state.Z)


def shape_complexity(state: QuantumState) -> float:
    """LMC complexity C = <rho_n> exp(S)."""
    return disequilibrium(state).approx * math.exp(shannon_entropy(state))


@lru_cache(maxsize=None)
def power_moment_coefficient(n: int, k: int) -> Fraction:
    """B_k(n) with <x^k>_n = B_k(n) / Z^k."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be an integer with n >= 1, got {n!r}")
    if int(k) != k or k < 1:
        raise InvalidInputError(f"k must be a positive integer, got {k!r}")
    n, k = int(n), int(k)
    total = sum(binomial(k + 1, n - i - 1) ** 2 * (math.factorial(k + i + 2) // math.factorial(i))
                for i in range(n))
    return Fraction(n) ** (k - 2) * Fraction(total, 2 ** (k + 1))


def power_moment(state: QuantumState, k: int) -> float:
    """<x^k>_n."""
    b = power_moment_coefficient(state.n, k)
    try:
        return float(b) / state.Z**k
    except OverflowError:
        return math.exp(_log_fraction(b) - k * math.log(state.Z))


def standard_deviation(state: QuantumState) -> float:
    """Delta x from the exact first two power moments."""
    n = state.n
    variance = power_moment_coefficient(n, 2) - power_moment_coefficient(n, 1) ** 2
    return math.sqrt(variance) / state.Z


def renyi_length(state: QuantumState, q) -> float:
    """exp(R_q).

    Integer q uses n^{(3q-1)/(q-1)} / Z * (2 / I_q)^{1/(q-1)} with exact
    I_q; other q go through the quadrature value of W_q.
    """
    _check_q(q, allow_one=False)
    n, z = state.n, state.Z
    if _is_integer(q):
        q = int(q)
        ratio = 2 * Fraction(n) ** (3 * q - 1) / ef.iq_poly_expansion(n, q).exact
        try:
            return float(ratio) ** (1.0 / (q - 1)) / z
        except OverflowError:
            return math.exp(_log_fraction(ratio) / (q - 1)) / z
    return math.exp(renyi_entropy(state, q))


def shannon_length(state: QuantumState) -> float:
    return math.exp(shannon_entropy(state))


def fisher_length(state: QuantumState) -> float:
    """(delta x)_n = n / (2Z)."""
    return state.n / (2.0 * state.Z)


@dataclass(frozen=True)
class Lengths:
    renyi: dict
    shannon: float
    fisher: float
    stddev: float


def lengths(state: QuantumState, q_list: Iterable = (2, 5)) -> Lengths:
    qs = list(q_list)
    for q in qs:
        _check_q(q, allow_one=False)
    return Lengths(renyi={q: renyi_length(state, q) for q in qs}, shannon=shannon_length(state),
                   fisher=fisher_length(state), stddev=standard_deviation(state))


@dataclass(frozen=True)
class StateReport:
    n: int
    Z: float
    moments: dict
    renyi: dict
    tsallis: dict
    disequilibrium: ef.MomentResult
    linear_entropy: float
    shannon: float
    complexity: float
    lengths: Lengths
    power_moments: dict = field(default_factory=dict)
    exact_moments: dict = field(default_factory=dict)
    exact_power_moments: dict = field(default_factory=dict)
    bounds: Optional[tuple] = None


def state_report(state: QuantumState, q_list: Iterable = (2, 3), k_list: Iterable = (1, 2)) -> StateReport:
    """Every measure of ``state`` in one bundle."""
    qs = list(q_list)
    for q in qs:
        _check_q(q, allow_one=False)
    moments, exact_moments = {1: 1.0}, {1: Fraction(1)}
    for q in qs:
        w = entropic_moment(state, q)
        moments[q] = w.approx
        if w.exact is not None:
            exact_moments[q] = w.exact
    ks = list(k_list)
    return StateReport(
        n=state.n,
        Z=state.Z,
        moments=moments,
        renyi={q: renyi_entropy(state, q) for q in qs},
        tsallis={q: tsallis_entropy(state, q) for q in qs},
        disequilibrium=disequilibrium(state),
        linear_entropy=linear_entropy(state),
        shannon=shannon_entropy(state),
        complexity=shape_complexity(state),
        lengths=lengths(state, qs),
        power_moments={k: power_moment(state, k) for k in ks},
        exact_moments=exact_moments,
        exact_power_moments={k: power_moment_coefficient(state.n, k) for k in ks},
    )
