"""Gauss rules and a composite integrator for integrands on [0, inf).

Rules come from the Jacobi-matrix eigenproblem (Golub-Welsch); nodes are
then polished with a few Newton steps on the three-term recurrence, and
weights are evaluated in log space from the classical closed forms so the
tiny trailing Gauss-Laguerre weights keep full relative accuracy.  For
orders past ~180 those weights underflow in double precision; their
logarithms stay available in ``QuadratureRule.log_weights``.

The composite integrator splits [0, cutoff] into Gauss-Legendre panels
(breakpoints are usually zeros of a Laguerre polynomial, where the
integrands of interest have log kinks) and handles [cutoff, inf) with a
shifted, optionally rescaled, Gauss-Laguerre rule.  Every integral is
computed twice, at the plan's order and at twice that order, and the
difference is returned as the error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ConvergenceError, InvalidInputError
from .laguerre_core import laguerre_log_abs

MAX_LAGUERRE_ORDER = 400
MAX_LEGENDRE_ORDER = 2048

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-14


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray
    alpha: float = 0.0
    a: float = -1.0
    b: float = 1.0

    def integrate(self, f: Callable) -> float:
        """Apply the rule to ``f`` (weight function implied by the kind)."""
        return float(np.dot(self.weights, f(self.nodes)))


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _laguerre_pair(order, alpha, x):
    """Scaled (L_order, L_{order-1}) at x; ratios are exact, magnitudes are not."""
    prev = np.ones_like(x)
    cur = 1.0 + alpha - x
    for k in range(1, order):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        s = np.maximum(np.abs(cur), 1.0)
        prev, cur = prev / s, cur / s
    return cur, prev


def _laguerre_rule(order, alpha):
    k = np.arange(order, dtype=float)
    diag = 2 * k + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x = np.sort(eigvalsh_tridiagonal(diag, off))
    for _ in range(3):
        if order == 1:
            break
        ln, lm = _laguerre_pair(order, alpha, x)
        deriv = order * ln - (order + alpha) * lm
        x = x - x * ln / deriv
    if order == 1:
        x = np.array([1.0 + alpha])
    # w_i = Gamma(N+a+1) / (N! x_i [L_N'(x_i)]^2) with x L_N' = N L_N - (N+a) L_{N-1};
    # the residual L_N term keeps w stationary in the node's rounding error
    log_cur, sign_cur = laguerre_log_abs(order, int(alpha), x)
    log_prev, sign_prev = laguerre_log_abs(order - 1, int(alpha), x)
    ratio = sign_cur * sign_prev * np.exp(np.minimum(log_cur - log_prev, 0.0))
    log_w = (math.lgamma(order + alpha + 1) - math.lgamma(order + 1)
             + np.log(x) - 2 * np.log(np.abs(order * ratio - (order + alpha))) - 2 * log_prev)
    return x, log_w


def _legendre_rule(order):
    k = np.arange(1, order, dtype=float)
    off = k / np.sqrt(4 * k * k - 1)
    x = np.sort(eigvalsh_tridiagonal(np.zeros(order), off))

    def pair(x):
        prev = np.ones_like(x)
        cur = x.copy()
        for j in range(1, order):
            prev, cur = cur, ((2 * j + 1) * x * cur - j * prev) / (j + 1)
        return cur, prev

    if order == 1:
        return np.zeros(1), np.array([math.log(2.0)])
    for _ in range(2):
        pn, pm = pair(x)
        deriv = order * (x * pn - pm) / (x * x - 1)
        x = x - pn / deriv
    # w = 2 / ((1-x^2) P_N'(x)^2); keeping the P_N term makes w insensitive to the last ulp of x
    pn, pm = pair(x)
    one_minus_sq = (1.0 - x) * (1.0 + x)
    log_w = (math.log(2.0) + np.log(one_minus_sq) - 2 * math.log(order)
             - 2 * np.log(np.abs(pm - x * pn)))
    return x, log_w


@lru_cache(maxsize=64)
def build_rule(kind: str, order: int, alpha: float = 0.0, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Build a Gauss rule.

    ``kind`` is ``"gauss_laguerre"`` (weight t**alpha e**-t on [0, inf),
    integer alpha) or ``"gauss_legendre"`` (unit weight on [a, b]).
    """
    if int(order) != order or order < 1:
        raise InvalidInputError(f"quadrature order must be a positive integer, got {order!r}")
    order = int(order)
    if kind == "gauss_laguerre":
        if order > MAX_LAGUERRE_ORDER:
            raise InvalidInputError(f"Gauss-Laguerre order {order} exceeds {MAX_LAGUERRE_ORDER}")
        if alpha < 0 or not float(alpha).is_integer():
            raise InvalidInputError(f"alpha must be a nonnegative integer, got {alpha!r}")
        x, log_w = _laguerre_rule(order, float(alpha))
        return QuadratureRule(kind, order, _frozen(x), _frozen(np.exp(log_w)), _frozen(log_w), alpha=float(alpha),
                              a=0.0, b=math.inf)
    if kind == "gauss_legendre":
        if order > MAX_LEGENDRE_ORDER:
            raise InvalidInputError(f"Gauss-Legendre order {order} exceeds {MAX_LEGENDRE_ORDER}")
        if not b > a:
            raise InvalidInputError("gauss_legendre needs a < b")
        x, log_w = _legendre_rule(order)
        half = 0.5 * (b - a)
        nodes = a + half * (x + 1.0)
        log_w = log_w + math.log(half)
        return QuadratureRule(kind, order, _frozen(nodes), _frozen(np.exp(log_w)), _frozen(log_w), a=float(a),
                              b=float(b))
    raise InvalidInputError(f"unknown quadrature kind {kind!r}")


def gauss_laguerre(order: int, alpha: float = 0.0) -> QuadratureRule:
    return build_rule("gauss_laguerre", order, alpha)


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    return build_rule("gauss_legendre", order, 0.0, float(a), float(b))


def laguerre_zeros(degree: int, alpha: int = 1) -> np.ndarray:
    """Zeros of L_degree^(alpha), ascending (empty for degree 0)."""
    if degree == 0:
        return np.empty(0)
    return np.asarray(gauss_laguerre(degree, alpha).nodes)


@dataclass(frozen=True)
class CompositePlan:
    """Panel layout for :func:`integrate_semiinfinite`.

    Panels run between consecutive ``breakpoints`` and from the last
    breakpoint to ``tail_cutoff``; any panel wider than
    ``max_panel_width`` is split evenly.  The tail [tail_cutoff, inf) uses
    a Gauss-Laguerre rule in the variable ``s = tail_rate * (t - cutoff)``,
    so ``tail_rate`` should roughly match the integrand's decay rate.
    """

    breakpoints: tuple
    tail_cutoff: float
    panel_order: int = 64
    max_panel_width: float = 8.0
    tail_rate: float = 1.0
    tail_order: int = 64

    def __post_init__(self):
        bp = tuple(float(v) for v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        if not bp or bp[0] != 0.0:
            raise InvalidInputError("breakpoints must start at 0")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise InvalidInputError("breakpoints must be strictly increasing")
        if not self.tail_cutoff > bp[-1]:
            raise InvalidInputError("tail_cutoff must exceed the last breakpoint")
        if self.panel_order < 1 or self.tail_order < 1:
            raise InvalidInputError("panel orders must be positive")
        if self.max_panel_width <= 0 or self.tail_rate <= 0:
            raise InvalidInputError("max_panel_width and tail_rate must be positive")

    def panel_edges(self) -> np.ndarray:
        edges = [self.breakpoints[0]]
        for hi in self.breakpoints[1:] + (float(self.tail_cutoff),):
            lo = edges[-1]
            pieces = max(1, math.ceil((hi - lo) / self.max_panel_width))
            edges.extend(np.linspace(lo, hi, pieces + 1)[1:].tolist())
        return np.asarray(edges)

    def with_order(self, panel_order: int, tail_order: int | None = None) -> "CompositePlan":
        return CompositePlan(self.breakpoints, self.tail_cutoff, panel_order, self.max_panel_width,
                             self.tail_rate, tail_order if tail_order is not None else self.tail_order)


def laguerre_zero_plan(degree: int, alpha: int = 1, n: int | None = None, **kwargs) -> CompositePlan:
    """Plan split at the zeros of L_degree^(alpha), default cutoff rule.

    cutoff = largest zero + 40 + 8 sqrt(n), where ``n`` defaults to
    ``degree + 1`` (the principal quantum number of the state).
    """
    zeros = laguerre_zeros(degree, alpha)
    n = degree + 1 if n is None else n
    last = float(zeros[-1]) if zeros.size else 0.0
    return CompositePlan((0.0,) + tuple(zeros.tolist()), last + 40.0 + 8.0 * math.sqrt(n), **kwargs)


def geometric_breakpoints(lo: float, hi: float, count: int, ratio: float = 0.15) -> tuple:
    """0 followed by ``count`` points accumulating geometrically toward ``lo``=0.

    Useful for panels that touch an endpoint singularity such as t ln t.
    """
    pts = [hi * ratio**k for k in range(count)]
    return (0.0,) + tuple(sorted(p for p in pts if p > lo))


class QuadResult(NamedTuple):
    value: float
    error: float


def _panel_sum(f, edges, order):
    ref = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    t = lo + half * (ref.nodes[None, :] + 1.0)
    vals = np.asarray(f(t.ravel()), dtype=float).reshape(t.shape)
    return float(np.sum(half * vals * ref.weights[None, :]))


def _tail_sum(f, cutoff, rate, order):
    rule = gauss_laguerre(order)
    s = rule.nodes
    # weights absorb e^{s}; f at far nodes underflows to 0 instead of inf*0
    scaled_w = np.exp(rule.log_weights + s)
    vals = np.asarray(f(cutoff + s / rate), dtype=float)
    return float(np.dot(scaled_w, vals)) / rate


def integrate_semiinfinite(f: Callable, plan: CompositePlan, rtol: float = DEFAULT_RTOL,
                           atol: float = DEFAULT_ATOL, check: bool = True) -> QuadResult:
    """Integrate a vectorised ``f`` over (0, inf) following ``plan``.

    The value is computed at the plan's orders and at double those
    orders; the finer result is returned with ``|fine - coarse|`` as the
    error estimate.  With ``check`` set, an estimate above
    ``max(rtol*|value|, atol)`` raises :class:`ConvergenceError`.
    """
    edges = plan.panel_edges()
    coarse = (_panel_sum(f, edges, plan.panel_order)
              + _tail_sum(f, plan.tail_cutoff, plan.tail_rate, plan.tail_order))
    fine = (_panel_sum(f, edges, 2 * plan.panel_order)
            + _tail_sum(f, plan.tail_cutoff, plan.tail_rate, min(2 * plan.tail_order, MAX_LAGUERRE_ORDER)))
    err = abs(fine - coarse)
    if not math.isfinite(fine):
        raise ConvergenceError("integrand produced a non-finite result", value=fine, estimate=err)
    if check and err > max(rtol * abs(fine), atol):
        raise ConvergenceError(
            f"order doubling changed the integral by {err:.3e} (value {fine:.6e}, rtol {rtol:g})",
            value=fine, estimate=err)
    return QuadResult(fine, err)
