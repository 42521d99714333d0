"""Exact and floating-point Laguerre polynomial machinery.

Coefficient arithmetic is exact (``fractions.Fraction``); floats appear
only when a polynomial is evaluated for numerical work.  For floating
evaluation of high-degree Laguerre polynomials use :func:`laguerre_eval`
or :func:`laguerre_log_abs`, which run the three-term degree recurrence
directly on ``t``; Horner evaluation of the coefficient form cancels
catastrophically once the degree passes ~30.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError

try:  # GMP multiplication; plain ints work, just slower on huge operands
    from gmpy2 import mpz as _mpz
except ImportError:
    _mpz = None

EULER_GAMMA = 0.57721566490153286060651209008240243


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # exact binary value, not a decimal guess
        return Fraction(value)
    return Fraction(value)


def _lcm_denominator(coeffs: Sequence[Fraction]) -> int:
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return den


def _big_multiply(x: int, y: int) -> int:
    if _mpz is None:
        return x * y
    return int(_mpz(x) * _mpz(y))


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Integer polynomial product by Kronecker substitution.

    Both operands are packed into single integers at a slot width that
    cannot overflow, multiplied once, and unpacked with balanced digits
    to recover signs.
    """
    size = len(a) + len(b) - 1
    if min(len(a), len(b)) < 8:
        out = [0] * size
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    bound = max(abs(x) for x in a).bit_length() + max(abs(x) for x in b).bit_length()
    nbytes = (bound + min(len(a), len(b)).bit_length() + 2 + 7) // 8

    def pack(seq):
        # byte-aligned slots; positive and negative parts packed separately
        pos = b"".join(max(c, 0).to_bytes(nbytes, "little") for c in seq)
        neg = b"".join(max(-c, 0).to_bytes(nbytes, "little") for c in seq)
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    prod = _big_multiply(pack(a), pack(b))
    raw = prod.to_bytes(nbytes * (size + 1), "little", signed=True)
    full, half = 1 << (8 * nbytes), 1 << (8 * nbytes - 1)
    out, carry = [], 0
    for i in range(size):
        digit = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        carry = 0
        if digit >= half:
            digit -= full
            carry = 1
        out.append(digit)
    return out


@dataclass(frozen=True)
class RationalPoly:
    """Dense polynomial with exact rational coefficients, ascending order.

    Trailing zero coefficients are stripped on construction, so the
    leading coefficient is nonzero unless the polynomial is identically
    zero (stored as ``(0,)``).
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = [_as_fraction(c) for c in self.coeffs] or [Fraction(0)]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, coeffs) -> "RationalPoly":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "RationalPoly":
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __add__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return RationalPoly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalPoly) else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            s = _as_fraction(other)
            return RationalPoly(tuple(c * s for c in self.coeffs))
        # clear denominators so the convolution runs on plain ints
        da = _lcm_denominator(self.coeffs)
        db = _lcm_denominator(other.coeffs)
        ia = [int(c * da) for c in self.coeffs]
        ib = [int(c * db) for c in other.coeffs]
        den = da * db
        return RationalPoly(tuple(Fraction(c, den) for c in _int_convolve(ia, ib)))

    __rmul__ = __mul__

    def __call__(self, x):
        """Exact Horner evaluation (ints, Fractions); floats go through ``evaluate``."""
        if isinstance(x, (float, np.ndarray, np.floating)):
            return self.evaluate(x)
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate(self, x):
        """Float Horner evaluation; fine for low degree only."""
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "RationalPoly":
        if self.degree == 0:
            return RationalPoly((0,))
        return RationalPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def scale_argument(self, factor) -> "RationalPoly":
        """Return the polynomial ``t -> p(factor * t)``."""
        f = _as_fraction(factor)
        return RationalPoly(tuple(c * f**i for i, c in enumerate(self.coeffs)))

    def shift_degree(self, k: int) -> "RationalPoly":
        """Multiply by ``t**k``."""
        if self.is_zero():
            return self
        return RationalPoly((0,) * k + self.coeffs)


class LaguerreParams(NamedTuple):
    n: int
    alpha: int = 0


def _check_params(n, alpha):
    if int(n) != n or n < 0:
        raise InvalidInputError(f"Laguerre degree must be a nonnegative integer, got {n!r}")
    if int(alpha) != alpha or alpha < 0:
        raise InvalidInputError(f"Laguerre alpha must be a nonnegative integer, got {alpha!r}")


@lru_cache(maxsize=512)
def laguerre_poly(n: int, alpha: int = 0) -> RationalPoly:
    """Exact L_n^(alpha) from the explicit finite series.

    >>> laguerre_poly(2, 1).coeffs
    (Fraction(3, 1), Fraction(-3, 1), Fraction(1, 2))
    """
    _check_params(n, alpha)
    n, alpha = int(n), int(alpha)
    return RationalPoly(tuple(
        Fraction((-1) ** k * math.comb(n + alpha, n - k), math.factorial(k))
        for k in range(n + 1)
    ))


def laguerre_poly_recurrence(n: int, alpha: int = 0) -> RationalPoly:
    """Exact L_n^(alpha) built from the degree recurrence (cross-check path)."""
    _check_params(n, alpha)
    prev = RationalPoly((1,))
    if n == 0:
        return prev
    cur = RationalPoly((1 + alpha, -1))
    t = RationalPoly((0, 1))
    for k in range(1, n):
        nxt = (cur * (2 * k + 1 + alpha) - t * cur - prev * (k + alpha)) * Fraction(1, k + 1)
        prev, cur = cur, nxt
    return cur


def poly_pow(p: RationalPoly, m: int) -> RationalPoly:
    """Exact m-th power by repeated squaring on the denominator-cleared integer form."""
    if int(m) != m or m < 1:
        raise InvalidInputError(f"power must be a positive integer, got {m!r}")
    m = int(m)
    den = _lcm_denominator(p.coeffs)
    base = [int(c * den) for c in p.coeffs]
    result = None
    e = m
    while e:
        if e & 1:
            result = base if result is None else _int_convolve(result, base)
        e >>= 1
        if e:
            base = _int_convolve(base, base)
    den_m = den**m
    return RationalPoly(tuple(Fraction(c, den_m) for c in result))


def integrate_poly_exp(p: RationalPoly, s, j: int = 0) -> Fraction:
    """Exact value of the integral of t**j * p(t) * exp(-s t) over (0, inf).

    Uses the termwise rule  int t**m exp(-s t) dt = m! / s**(m+1).
    """
    s = _as_fraction(s)
    if s <= 0:
        raise InvalidInputError(f"decay rate s must be positive, got {s}")
    if int(j) != j or j < 0:
        raise InvalidInputError(f"j must be a nonnegative integer, got {j!r}")
    j = int(j)
    if p.is_zero():
        return Fraction(0)
    # put everything over s**(j+deg+1) and a common coefficient denominator
    deg = p.degree
    den = _lcm_denominator(p.coeffs)
    num_s, den_s = s.numerator, s.denominator
    total = 0
    fact = math.factorial(j)
    for m, c in enumerate(p.coeffs):
        if m:
            fact *= j + m
        if c:
            # m! / s**(j+m+1) = fact * den_s**(j+m+1) * num_s**(deg-m) / num_s**(j+deg+1)
            total += int(c * den) * fact * den_s ** (j + m + 1) * num_s ** (deg - m)
    return Fraction(total, den * num_s ** (j + deg + 1))


def recurrence_step(k: int) -> tuple[int, int, int]:
    """Coefficients of t L_{2k}^(2) in terms of L_{2k}, L_{2k+1}, L_{2k-1} (all alpha=2)."""
    if int(k) != k or k < 0:
        raise InvalidInputError(f"k must be a nonnegative integer, got {k!r}")
    return (4 * k + 3, -(2 * k + 1), -(2 * k + 2))


def laguerre_eval(n: int, alpha: int, t):
    """Float L_n^(alpha)(t) via the three-term degree recurrence."""
    _check_params(n, alpha)
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev
    cur = 1.0 + alpha - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
    return cur


_RESCALE = 1e150


def laguerre_log_abs(n: int, alpha: int, t):
    """Return ``(log|L_n^(alpha)(t)|, sign)`` without overflow.

    Same recurrence as :func:`laguerre_eval`, with the pair of iterates
    rescaled whenever it grows past 1e150.  At exact zeros the log is -inf
    and the sign is 0.
    """
    _check_params(n, alpha)
    t = np.asarray(t, dtype=float)
    log_scale = np.zeros_like(t)
    prev = np.ones_like(t)
    if n == 0:
        cur = prev
    else:
        cur = 1.0 + alpha - t
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
            big = np.abs(cur) > _RESCALE
            if np.any(big):
                prev = np.where(big, prev / _RESCALE, prev)
                cur = np.where(big, cur / _RESCALE, cur)
                log_scale = log_scale + np.where(big, math.log(_RESCALE), 0.0)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(cur)) + log_scale
    return log_abs, np.sign(cur)


# -- scalar special functions ---------------------------------------------

@lru_cache(maxsize=None)
def harmonic(m: int) -> Fraction:
    """H_m = sum_{j=1}^m 1/j, exact."""
    if m < 0:
        raise InvalidInputError("harmonic number needs m >= 0")
    return sum((Fraction(1, j) for j in range(1, m + 1)), Fraction(0))


def digamma(n: int) -> float:
    """psi(n) = -gamma + H_{n-1} at positive integers."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"digamma is only provided at positive integers, got {n!r}")
    return -EULER_GAMMA + float(harmonic(int(n) - 1))


def pochhammer(a, m: int) -> Fraction:
    """Rising factorial (a)_m = a (a+1) ... (a+m-1), exact."""
    if int(m) != m or m < 0:
        raise InvalidInputError(f"Pochhammer length must be a nonnegative integer, got {m!r}")
    a = _as_fraction(a)
    out = Fraction(1)
    for i in range(int(m)):
        out *= a + i
    return out


def log_gamma(x: float) -> float:
    if x <= 0:
        raise InvalidInputError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def binomial(a: int, b: int) -> int:
    """Integer binomial coefficient, zero outside 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)
