import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coulomb_infolab.entropic_functionals import iq_poly_expansion
from coulomb_infolab.errors import InvalidInputError
from coulomb_infolab.laguerre_core import EULER_GAMMA, RationalPoly, integrate_poly_exp, laguerre_poly
from coulomb_infolab.measures import (QuantumState, density, disequilibrium, disequilibrium_coefficient, entropic_moment,
                                      fisher_length, lengths, linear_entropy, power_moment, power_moment_coefficient,
                                      renyi_entropy, renyi_length, shannon_entropy, shannon_length, shape_complexity,
                                      standard_deviation, state_report, tsallis_entropy)
from coulomb_infolab.quadrature import CompositePlan, geometric_breakpoints, integrate_semiinfinite, laguerre_zero_plan

# 30-digit mpmath values of -int rho ln rho at Z=1
SHANNON_REFERENCE = {
    2: 2.2343364474240369652,
    3: 2.90562476396638907381,
    5: 3.78173548623404593532,
}


def direct_shannon(n):
    """-int rho ln rho, integrated in t = 2x/n at Z=1."""
    def integrand(t):
        l = laguerre_poly(n - 1, 1).evaluate(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = t * t * np.exp(-t) * l * l
            log_rho = -3 * math.log(n) + 2 * np.log(t) - t + np.log(l * l)
            out = -weight * log_rho / (2 * n * n)
        return np.where(weight == 0, 0.0, out)

    plan = laguerre_zero_plan(n - 1, 1, n=n)
    # t^2 ln t at the origin wants graded panels below the first zero
    head = geometric_breakpoints(0.0, plan.breakpoints[1], 12)
    plan = CompositePlan(head + plan.breakpoints[2:], plan.tail_cutoff)
    return integrate_semiinfinite(integrand, plan, rtol=1e-9).value


def test_state_validation():
    for bad in (0, -1, 1.5, True):
        with pytest.raises(InvalidInputError, match="n >= 1"):
            QuantumState(bad)
    for z in (0, -2, math.inf, math.nan):
        with pytest.raises(InvalidInputError):
            QuantumState(1, z)
    assert QuantumState(3, 2.0).energy == pytest.approx(-4 / 9)


def test_density_examples():
    s1 = QuantumState(1)
    assert density(s1, 1e-12) < 1e-20
    assert density(QuantumState(2), 2.0) == 0.0
    with pytest.raises(InvalidInputError):
        density(s1, 0.0)
    with pytest.raises(InvalidInputError):
        density(s1, np.array([1.0, -1.0]))
    x = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(density(s1, x), 4 * x * x * np.exp(-2 * x), rtol=1e-14)


def test_moment_examples():
    for z in (0.5, 1.0, 4.0):
        s = QuantumState(1, z)
        assert entropic_moment(s, 1).exact == 1 and entropic_moment(s, 1).approx == pytest.approx(1.0, rel=1e-15)
        for q in range(1, 7):
            w = entropic_moment(s, q)
            assert w.exact == F(math.factorial(2 * q), 2 * q ** (2 * q + 1))
            assert w.approx == pytest.approx(float(w.exact) * z ** (q - 1), rel=1e-14)
            assert w.z_power == q - 1
    assert entropic_moment(QuantumState(1), 2).exact == F(3, 8)


def test_moment_routes_agree():
    for method in ("poly_expansion", "lauricella_sum", "closed_form_n2"):
        assert entropic_moment(QuantumState(2), 3, method=method).exact == entropic_moment(QuantumState(2), 3).exact
    assert entropic_moment(QuantumState(1), 4, method="closed_form_n1").exact == F(8 * 7 * 6 * 5 * 4 * 3 * 2, 2 * 4**9)
    with pytest.raises(InvalidInputError):
        entropic_moment(QuantumState(3), 2, method="closed_form_n2")
    with pytest.raises(InvalidInputError):
        entropic_moment(QuantumState(3), 2.5, method="poly_expansion")
    for q in (0, -1):
        with pytest.raises(InvalidInputError):
            entropic_moment(QuantumState(3), q)


def test_normalization_to_100():
    for n in range(1, 101):
        assert entropic_moment(QuantumState(n), 1).exact == 1


def test_renyi_tsallis_examples():
    s = QuantumState(1)
    assert renyi_entropy(s, 2) == pytest.approx(-math.log(3 / 8), rel=1e-15)
    assert renyi_entropy(s, 2) == pytest.approx(0.9808, abs=1e-4)
    assert tsallis_entropy(s, 2) == pytest.approx(5 / 8, rel=1e-15)
    for fn in (renyi_entropy, tsallis_entropy):
        with pytest.raises(InvalidInputError, match="shannon"):
            fn(s, 1)


def test_renyi_approaches_shannon():
    s = QuantumState(1)
    gaps = [abs(renyi_entropy(s, q) - 2 * EULER_GAMMA) for q in (1.01, 1.001)]
    assert gaps[1] < gaps[0] < 0.05
    assert gaps[1] < 5e-3


def test_tsallis_sign_convention():
    # (1 - W_q)/(q - 1) is positive for q > 1 and for 0 < q < 1 alike
    s = QuantumState(2)
    for q in (0.5, 2, 3):
        assert tsallis_entropy(s, q) > 0
    w = entropic_moment(s, 3).approx
    assert tsallis_entropy(s, 3) == pytest.approx((1 - w) / 2)


def test_disequilibrium_examples():
    assert disequilibrium_coefficient(1) == F(3, 8)
    assert disequilibrium_coefficient(2) == F(33, 256)
    assert disequilibrium_coefficient(3) == F(17, 256)
    d = disequilibrium(QuantumState(2, 3.0))
    assert d.exact == F(33, 256) and d.approx == pytest.approx(99 / 256) and d.method == "disequilibrium_sum"


def test_disequilibrium_three_routes():
    for n in range(1, 13):
        assert disequilibrium_coefficient(n) == entropic_moment(QuantumState(n), 2).exact
    for n in (1, 5, 13, 22, 30):
        quad = entropic_moment(QuantumState(n), 2, method="quadrature").approx
        assert quad == pytest.approx(float(disequilibrium_coefficient(n)), rel=1e-9)


def test_linear_entropy():
    assert linear_entropy(QuantumState(1)) == pytest.approx(5 / 8, rel=1e-15)
    assert linear_entropy(QuantumState(2)) == pytest.approx(223 / 256, rel=1e-15)
    values = [linear_entropy(QuantumState(n)) for n in range(1, 51)]
    assert all(a < b < 1 for a, b in zip(values, values[1:]))


def test_shannon_examples():
    assert shannon_entropy(QuantumState(1)) == pytest.approx(2 * EULER_GAMMA, rel=1e-14)
    assert shannon_entropy(QuantumState(1)) == pytest.approx(1.1544, abs=1e-4)
    assert shannon_entropy(QuantumState(1, math.e)) == pytest.approx(2 * EULER_GAMMA - 1, rel=1e-13)
    for n, ref in SHANNON_REFERENCE.items():
        assert shannon_entropy(QuantumState(n)) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("n", [2, 4, 9, 16])
def test_shannon_matches_direct_integral(n):
    assert shannon_entropy(QuantumState(n)) == pytest.approx(direct_shannon(n), rel=1e-9)


def test_shannon_rydberg_limit():
    gap = [abs(shannon_entropy(QuantumState(n)) - math.log(2 * math.pi * n * n / math.e**2)) for n in (50, 100)]
    assert gap[1] < gap[0]


def test_complexity_examples():
    c1 = shape_complexity(QuantumState(1))
    assert c1 == pytest.approx(0.375 * math.exp(2 * EULER_GAMMA), rel=1e-13)
    assert round(c1, 4) == 1.1896
    assert shape_complexity(QuantumState(1, 7.0)) == pytest.approx(c1, rel=1e-12)
    ratio = [shape_complexity(QuantumState(n)) / (2 * math.pi * n * n / math.e**2 * float(disequilibrium_coefficient(n)))
             for n in (25, 50, 100)]
    assert abs(ratio[2] - 1) < abs(ratio[1] - 1) < abs(ratio[0] - 1)


def test_complexity_at_least_one():
    assert all(shape_complexity(QuantumState(n)) >= 1 for n in range(1, 51))


def test_power_moment_examples():
    assert power_moment_coefficient(1, 1) == F(3, 2)
    for n in range(1, 30):
        assert power_moment_coefficient(n, 1) == F(3 * n * n, 2)
        assert power_moment_coefficient(n, 2) == F(n * n * (5 * n * n + 1), 2)
    assert power_moment(QuantumState(4, 2.0), 1) == pytest.approx(12.0)
    with pytest.raises(InvalidInputError):
        power_moment_coefficient(2, 0)


@pytest.mark.parametrize("n,k", [(1, 3), (2, 3), (3, 4), (6, 2)])
def test_power_moment_exact_oracle(n, k):
    # <x^k> = (n/2)^k / (2n^2) int t^(k+2) e^-t L^2 dt at Z=1
    l2 = laguerre_poly(n - 1, 1) * laguerre_poly(n - 1, 1)
    want = F(n, 2) ** k / (2 * n * n) * integrate_poly_exp(l2, 1, k + 2)
    assert power_moment_coefficient(n, k) == want


def test_standard_deviation_from_moments():
    for n in range(1, 40):
        var = power_moment_coefficient(n, 2) - power_moment_coefficient(n, 1) ** 2
        assert var == F(n * n * (n * n + 2), 4)
        assert standard_deviation(QuantumState(n)) == pytest.approx(n / 2 * math.sqrt(n * n + 2), rel=1e-15)
    assert standard_deviation(QuantumState(1)) == pytest.approx(math.sqrt(3) / 2)


def test_length_examples():
    s = QuantumState(1)
    assert renyi_length(s, 2) == 8 / 3
    assert fisher_length(s) == 0.5
    assert shannon_length(s) == pytest.approx(math.exp(2 * EULER_GAMMA), rel=1e-13)
    assert shannon_length(s) == pytest.approx(3.1722, abs=1e-4)
    # n=1 closed form for any real q
    for q in (1.5, 2.5, 4):
        want = q ** (2 + 3 / (q - 1)) * (2 / math.gamma(2 * q + 1)) ** (1 / (q - 1))
        assert renyi_length(s, q) == pytest.approx(want, rel=1e-10)


def test_renyi_length_general_formula():
    for n in (2, 5, 11):
        for q in (2, 3, 5):
            s = QuantumState(n, 1.7)
            w = entropic_moment(s, q).approx
            assert renyi_length(s, q) == pytest.approx(w ** (-1 / (q - 1)), rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_fisher_information_oracle(n):
    # F = 4 int (d sqrt(rho)/dx)^2 dx reduces to 2Z^2/n^4 int e^-t [(2-t)L + 2tL']^2 dt
    l = laguerre_poly(n - 1, 1)
    g = RationalPoly((2, -1)) * l + RationalPoly((0, 2)) * l.derivative()
    integral = integrate_poly_exp(g * g, 1, 0)
    assert integral == 2 * n * n
    fisher = F(2, n**4) * integral
    assert fisher_length(QuantumState(n)) == pytest.approx(1 / math.sqrt(fisher), rel=1e-15)


def test_renyi_length_monotone_in_q():
    for n in (1, 2, 3, 5, 7):
        values = [renyi_length(QuantumState(n), q) for q in (1.5, 2, 3, 5, 8)]
        assert all(a > b for a, b in zip(values, values[1:])), n


def test_renyi_length_grows_with_n():
    for q in (2, 5):
        values = [renyi_length(QuantumState(n), q) for n in range(1, 101)]
        assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("z", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("n", [1, 3, 8])
def test_z_scaling(n, z):
    base, s = QuantumState(n), QuantumState(n, z)
    for q in (2, 3, 2.5):
        assert entropic_moment(s, q).approx == pytest.approx(z ** (q - 1) * entropic_moment(base, q).approx, rel=1e-10)
    assert shannon_entropy(s) == pytest.approx(shannon_entropy(base) - math.log(z), rel=1e-10, abs=1e-12)
    assert shape_complexity(s) == pytest.approx(shape_complexity(base), rel=1e-10)
    lb, ls = lengths(base, (2, 5)), lengths(s, (2, 5))
    for a, b in [(lb.shannon, ls.shannon), (lb.fisher, ls.fisher), (lb.stddev, ls.stddev),
                 (lb.renyi[2], ls.renyi[2]), (lb.renyi[5], ls.renyi[5])]:
        assert b == pytest.approx(a / z, rel=1e-10)


@given(st.integers(1, 30), st.floats(0.01, 100))
@settings(max_examples=40, deadline=None)
def test_report_invariants(n, z):
    rep = state_report(QuantumState(n, z))
    assert rep.moments[1] == 1.0
    assert rep.complexity >= 0
    lens = rep.lengths
    assert min(lens.shannon, lens.fisher, lens.stddev, *lens.renyi.values()) > 0
    assert rep.exact_moments[2] == rep.disequilibrium.exact
    assert rep.linear_entropy == pytest.approx(1 - rep.disequilibrium.approx)


@given(st.integers(1, 40))
@settings(max_examples=20, deadline=None)
def test_renyi_entropy_decreasing_in_q(n):
    s = QuantumState(n)
    assert renyi_entropy(s, 2) >= renyi_entropy(s, 3) >= renyi_entropy(s, 4)
    assert shannon_entropy(s) >= renyi_entropy(s, 2)


def test_exact_moment_large_n_no_overflow():
    s = QuantumState(150)
    assert math.isfinite(renyi_length(s, 5)) and math.isfinite(renyi_entropy(s, 4))
    assert float(iq_poly_expansion(150, 2).exact) > 0
