"""Kullback-Leibler upper bounds on Shannon entropy and shape complexity.

With the prior family f(x) = k a^{1/k} / Gamma(1/k) exp(-a x^k), optimised
over a, one gets for every positive integer k

    S[rho_n] <= b(k, n) = ln( A_k / Z * B_k(n)^{1/k} )
    C[rho_n] <= c(k, n) = A_k D(n) B_k(n)^{1/k}

with A_k = (e k)^{1/k} Gamma(1/k) / k.  The best k is found by scanning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import InvalidInputError
from .measures import QuantumState, disequilibrium_coefficient, power_moment_coefficient

DEFAULT_K_MAX = 200


def _check_k(k):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InvalidInputError(f"k must be a positive integer, got {k!r}")
    return int(k)


def a_constant(k: int) -> float:
    k = _check_k(k)
    return math.exp((1.0 + math.log(k)) / k + math.lgamma(1.0 / k) - math.log(k))


def _log_bk(n, k):
    b = power_moment_coefficient(n, k)
    return math.log(b.numerator) - math.log(b.denominator)


def shannon_bound(state: QuantumState, k: int) -> float:
    """b(k, n)."""
    k = _check_k(k)
    return math.log(a_constant(k)) - math.log(state.Z) + _log_bk(state.n, k) / k


def complexity_bound(state: QuantumState, k: int) -> float:
    """c(k, n); independent of Z."""
    k = _check_k(k)
    return a_constant(k) * float(disequilibrium_coefficient(state.n)) * math.exp(_log_bk(state.n, k) / k)


def prior_normalization(k: int, a: float = 1.0) -> float:
    """Numerical integral of the prior density over (0, inf); should be 1."""
    k = _check_k(k)
    norm = k * a ** (1.0 / k) / math.gamma(1.0 / k)
    val, _ = quad(lambda x: norm * math.exp(-a * x**k), 0.0, math.inf, epsabs=1e-13, epsrel=1e-12)
    return val


@dataclass(frozen=True)
class BoundResult:
    n: int
    k: int
    shannon_bound: float
    complexity_bound: float
    a_k: float
    is_optimal: bool
    saturated: bool = False


def _argmin(values):
    # first index wins ties, i.e. the smaller k
    best = 0
    for i, v in enumerate(values):
        if v < values[best]:
            best = i
    return best


def scan_bounds(state: QuantumState, k_max: int = DEFAULT_K_MAX):
    """b(k, n) and c(k, n) for k = 1..k_max, as two lists."""
    k_max = _check_k(k_max)
    ks = range(1, k_max + 1)
    return [shannon_bound(state, k) for k in ks], [complexity_bound(state, k) for k in ks]


def optimal_k(state: QuantumState, k_max: int = DEFAULT_K_MAX) -> tuple[BoundResult, BoundResult]:
    """Best k for the Shannon bound and, separately, for the complexity bound.

    Returns ``(shannon_best, complexity_best)``.  ``saturated`` is set
    when the minimiser is k_max itself, i.e. the window may be too small.
    """
    b, c = scan_bounds(state, k_max)
    out = []
    for idx in (_argmin(b), _argmin(c)):
        k = idx + 1
        out.append(BoundResult(n=state.n, k=k, shannon_bound=b[idx], complexity_bound=c[idx],
                               a_k=a_constant(k), is_optimal=True, saturated=(k == k_max)))
    return out[0], out[1]
