import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hkfrac import fractional as fr
from hkfrac.core import NoConvergenceError
from hkfrac.mittag_leffler import MLParams3, ml_hk3

mpmath.mp.dps = 30

exponents = st.floats(0.2, 4.0)
orders = st.floats(0.1, 2.5)


def gp(*terms, base=0.0):
    return fr.GPSeries(base, tuple(terms))


# --------------------------------------------------------------------------
# series containers


def test_merge_combines_equal_exponents():
    s = gp((1.0, 2.8), (2.0, 2.8000000000000003), (0.5, 1.0))
    assert s.terms == ((0.5, 1.0), (3.0, 2.8))


def test_sub_cancels_to_empty():
    s = gp((1.0, 1.5), (2.0, 3.0))
    assert (s - s).terms == ()


def test_exponent_validation():
    with pytest.raises(ValueError):
        gp((1.0, 0.0))
    with pytest.raises(ValueError):
        fr.GPSeries2D((0.0, 0.0), ((1.0, 1.0, -0.5),))


def test_2d_product_evaluation():
    f = fr.GPSeries2D.product(gp((2.0, 1.5)), gp((3.0, 2.0)))
    assert f(0.25, 0.5) == pytest.approx(6.0 * 0.5 * 0.5)


# --------------------------------------------------------------------------
# termwise operators


def test_integral_of_constant():
    assert fr.rl_integral_series(gp((1.0, 1.0)), 1.0).terms == ((1.0, 2.0),)


@settings(max_examples=50)
@given(exponents, orders)
def test_integral_single_power(beta, mu):
    out = fr.rl_integral_series(gp((1.0, beta)), mu)
    (c, b), = out.terms
    assert b == pytest.approx(beta + mu)
    assert c == pytest.approx(special.gamma(beta) / special.gamma(beta + mu), rel=1e-13)


def test_derivative_of_linear():
    assert fr.rl_derivative_series(gp((1.0, 2.0)), 1.0).terms == ((1.0, 1.0),)


def test_derivative_of_constant_vanishes():
    assert fr.rl_derivative_series(gp((1.0, 1.0)), 1.0).terms == ()


def test_derivative_reports_non_integrable_result():
    with pytest.raises(fr.NonIntegrableError, match="non-integrable"):
        fr.rl_derivative_series(gp((1.0, 0.5)), 0.7)
    # the formal pointwise image is still available
    (c, b), = fr.rl_derivative_terms(gp((1.0, 0.5)), 0.7)
    assert b == pytest.approx(-0.2)
    assert c == pytest.approx(special.gamma(0.5) / special.gamma(-0.2))


@settings(max_examples=50)
@given(exponents, orders, orders)
def test_integral_semigroup(beta, a, b):
    f = gp((1.3, beta), (-0.4, beta + 0.75))
    lhs = fr.rl_integral_series(fr.rl_integral_series(f, a), b)
    rhs = fr.rl_integral_series(f, a + b)
    assert fr.coefficient_deviation(lhs, rhs) <= 1e-13


@settings(max_examples=50)
@given(exponents, orders)
def test_derivative_undoes_integral(beta, mu):
    f = gp((1.3, beta), (-0.4, beta + 1.25))
    back = fr.rl_derivative_series(fr.rl_integral_series(f, mu), mu)
    assert fr.coefficient_deviation(back, f) <= 1e-13


def test_2d_operators_act_per_axis():
    f = fr.GPSeries2D((0.0, 0.0), ((1.0, 1.5, 2.0), (2.0, 3.0, 1.0)))
    g = fr.rl_integral_2d(f, 0.5, 1.2)
    h = fr.rl_derivative_2d(g, 0.5, 1.2)
    assert fr.coefficient_deviation(h, f) <= 1e-14
    c, bx, by = g.terms[0]
    assert (bx, by) == (pytest.approx(2.0), pytest.approx(3.2))
    assert c == pytest.approx(special.gamma(1.5) / special.gamma(2.0) * special.gamma(2.0) / special.gamma(3.2))


# --------------------------------------------------------------------------
# numerical oracles


def test_numeric_integral_values():
    assert fr.rl_integral_numeric(lambda t: np.ones_like(t), 0.5, 0.0, 1.0) == pytest.approx(
        1.0 / math.gamma(1.5), rel=1e-14)
    assert fr.rl_integral_numeric(lambda t: t, 1.0, 0.0, 2.0) == pytest.approx(2.0, rel=1e-14)


def test_numeric_integral_matches_mpmath_for_smooth_f():
    mu, x = 0.65, 1.7
    ref = mpmath.quad(lambda t: (x - t) ** (mu - 1) * mpmath.exp(-t) * mpmath.cos(t), [0, x]) / mpmath.gamma(mu)
    val = fr.rl_integral_numeric(lambda t: np.exp(-t) * np.cos(t), mu, 0.0, x)
    assert val == pytest.approx(float(ref), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.2, 2.0), st.floats(0.3, 2.0))
def test_numeric_integral_matches_series(beta, mu, x):
    f = gp((1.0, beta), (0.5, beta + 1.0), base=0.2)
    exact = fr.rl_integral_series(f, mu)(0.2 + x)
    # the algebraic endpoint factor goes into the Jacobi weight
    num = fr.rl_integral_numeric(lambda t: 1.0 + 0.5 * (t - 0.2), mu, 0.2, 0.2 + x, lower_exponent=beta - 1.0)
    assert num == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("mu", [0.3, 0.8, 1.4])
def test_numeric_derivative_matches_series(mu):
    f = gp((1.0, 2.5), (0.3, 4.0))
    exact = fr.rl_derivative_series(f, mu)(1.1)
    num = fr.rl_derivative_numeric(lambda t: t ** 1.5 + 0.3 * t ** 3, mu, 0.0, 1.1)
    assert num == pytest.approx(exact, rel=1e-6)


# --------------------------------------------------------------------------
# Laplace transforms


@pytest.mark.parametrize("q", [0.5, 1.0, 3.0])
def test_laplace_elementary(q):
    assert fr.laplace_series(gp((1.0, 1.0)), q) == pytest.approx(1.0 / q)
    assert fr.laplace_series(gp((1.0, 2.0)), q) == pytest.approx(1.0 / q ** 2)


@settings(max_examples=30)
@given(st.floats(0.3, 3.0), st.floats(0.5, 4.0))
def test_laplace_series_vs_gauss_laguerre(beta, q):
    f = gp((1.0, beta), (-0.2, beta + 2.0))
    num = fr.laplace_numeric(lambda t: 1.0 - 0.2 * t ** 2, q, alpha=beta - 1.0)
    assert fr.laplace_series(f, q) == pytest.approx(num, rel=1e-12)


def test_ml_series_integral_shifts_rho():
    p = MLParams3(-4.0, -3.0, -1.5, 1.2, 2)
    x, w, mu, Y = 0.3, 0.6, 0.7, 1.3
    F = fr.ml_gpseries_y(p, x, w)
    image = fr.rl_integral_series(F, mu)(Y)
    shifted = ml_hk3(MLParams3(p.g1, p.g2, p.g3, p.rho + mu, p.k), x, w * Y).value
    assert image == pytest.approx(Y ** (p.rho + mu - 1.0) * shifted, rel=1e-12)
    direct = Y ** (p.rho - 1.0) * ml_hk3(p, x, w * Y).value
    assert F(Y) == pytest.approx(direct, rel=1e-13)


def test_ml_series_without_termination_needs_extent():
    # finite in s (g1 = -4), unbounded in r
    p = MLParams3(-4.0, 0.7, 1.3, 1.2, 1)
    with pytest.raises(ValueError):
        fr.ml_gpseries_y(p, 0.2, 0.3)
    F = fr.ml_gpseries_y(p, 0.2, 0.3, extent=1.0)
    assert F(0.9) == pytest.approx(0.9 ** 0.2 * ml_hk3(p, 0.2, 0.27).value, rel=1e-13)


def test_divergent_s_series_is_reported():
    # without a terminating g1 the s-terms grow like (2s)!/s!
    with pytest.raises(NoConvergenceError):
        ml_hk3(MLParams3(0.5, 0.7, 1.3, 1.2, 1), 0.2, 0.27)


@pytest.mark.parametrize("g1, g2, x, w, q", [(-4.0, -2.0, 0.1, 0.3, 1.5), (-2.0, -1.0, -0.2, 0.5, 2.0),
                                              (-6.0, -3.0, 0.05, 0.2, 1.0)])
def test_laplace_half_variant_matches_termwise(g1, g2, x, w, q):
    half, shifted = fr.laplace_ml_closed_forms(g1, g2, 1.3, 2, x, w, q)
    lhs = fr.laplace_ml_termwise(g1, g2, 1.3, 2, x, w, q)
    assert lhs == pytest.approx(half, rel=1e-10)
    assert abs(shifted - lhs) > 1e-6 * abs(lhs)


def test_two_f_zero_polynomial():
    # 2F0(-2, b; z) = 1 - 2 b z + b (b+1) z^2
    b, z = 0.7, 0.3
    assert fr.two_f_zero(-2.0, b, z) == pytest.approx(1 - 2 * b * z + b * (b + 1) * z * z)
    with pytest.raises(ValueError):
        fr.two_f_zero(0.5, 0.7, 0.1)


def test_laplace2d_trivial_parameters():
    lhs, rhs = fr.laplace2d_check(0.0, 0.0, 1.3, 0.8, 2, 0.1, 0.3, 1.5, 2.0)
    expect = 1.5 ** -1.3 * 2.0 ** -0.8
    assert lhs == pytest.approx(expect, rel=1e-14) and rhs == pytest.approx(expect, rel=1e-14)


def test_laplace2d_reference_point():
    lhs, rhs = fr.laplace2d_check(1.0, 0.5, 1.0, 1.0, 2, 0.05, 0.3, 2.0, 2.0)
    assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


def test_laplace2d_nu1_zero_is_one_dimensional():
    g2, kappa, rho, k, nu2, p, q = 0.5, 1.0, 1.0, 2, 0.3, 2.0, 2.0
    lhs, _ = fr.laplace2d_check(1.0, g2, kappa, rho, k, 0.0, nu2, p, q)
    # x-marginal is X^(kappa-1)/Gamma(kappa); y part is a Prabhakar series
    y_part = fr.GPSeries(0.0, tuple(
        (float(mpmath.rf(g2, r) / (mpmath.factorial(r) * mpmath.gamma(rho + k * r))) * nu2 ** (k * r),
         rho + k * r) for r in range(80)))
    assert lhs == pytest.approx(p ** -kappa * fr.laplace_series(y_part, q), rel=1e-12)


def test_laplace2d_domain_error():
    with pytest.raises(ValueError, match="domain error"):
        fr.laplace2d_check(1.0, 0.5, 1.0, 1.0, 2, 0.05, 3.0, 2.0, 2.0)


def test_laplace2d_domain_uses_absolute_convergence():
    # 1 - r2 > 1 for negative nu2, but the double sum needs 1 - |r2|
    point = (1.758, 1.850, 1.582, 1.624, 1, 0.4239, -0.7383, 2.867, 1.448)
    with pytest.raises(ValueError, match="domain error"):
        fr.laplace2d_check(*point)
    lhs, rhs = fr.laplace2d_check(1.758, 1.850, 1.582, 1.624, 1, 0.1, -0.7383, 2.867, 1.448)
    assert lhs == pytest.approx(rhs, rel=1e-9)
