import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkfrac.core import NonterminatingPoleError
from hkfrac.mittag_leffler import (
    BivariateML,
    DoubleHypergeometric,
    KdFParams,
    MLParams3,
    MLParams4,
    hk3_model,
    hk4_model,
    kdf_series,
    ml_cemo,
    ml_hk3,
    ml_hk4,
    ml_jk2,
    ml_prabhakar,
)

mpmath.mp.dps = 30


def mp_prabhakar(alpha, beta, gamma, z, terms=200):
    return mpmath.nsum(lambda n: mpmath.rf(gamma, int(n)) * mpmath.mpf(z) ** int(n)
                       / (mpmath.gamma(alpha * n + beta) * mpmath.factorial(n)), [0, terms])


def mp_double(coef, kappa, rho, k, x, y, S=60, R=60):
    # direct double sum with explicit Gamma factors
    x, y = mpmath.mpf(x), mpmath.mpf(y)
    total = 0
    for s in range(S):
        for r in range(R):
            c = coef(s, r)
            if c == 0:
                continue
            total += c * x ** s * y ** (k * r) / (
                mpmath.factorial(s) * mpmath.factorial(r)
                * mpmath.gamma(kappa + s) * mpmath.gamma(rho + k * r))
    return total


def hk4_coef(g1, g2, g3, g4):
    return lambda s, r: mpmath.rf(g1, 2 * s) * mpmath.rf(g2, s + r) / (mpmath.rf(g3, s) * mpmath.rf(g4, s))


# --------------------------------------------------------------------------
# Prabhakar


@pytest.mark.parametrize("z", [-1.5, 0.0, 0.3, 2.0])
def test_prabhakar_exponential(z):
    assert ml_prabhakar(1, 1, 1, z).value == pytest.approx(math.exp(z), rel=1e-15)


def test_prabhakar_zero_gamma():
    res = ml_prabhakar(0.7, 1.8, 0, 3.0)
    assert res.value == pytest.approx(1.0 / math.gamma(1.8), rel=1e-15) and res.terminated


@pytest.mark.parametrize("z", [0.2, 1.0, 2.5])
def test_prabhakar_cosh(z):
    assert ml_prabhakar(2, 1, 1, z * z).value == pytest.approx(math.cosh(z), rel=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.2, 4.0), st.floats(-2.0, 3.0), st.floats(-2.0, 2.0))
def test_prabhakar_against_mpmath(alpha, beta, gamma, z):
    ref = float(mp_prabhakar(alpha, beta, gamma, z))
    assert ml_prabhakar(alpha, beta, gamma, z).value == pytest.approx(ref, rel=1e-12, abs=1e-13)


def test_prabhakar_terminates_for_negative_integer_gamma():
    res = ml_prabhakar(1.0, 1.0, -2.0, 0.5)
    assert res.terminated
    assert res.value == pytest.approx(1 - 2 * 0.5 + 0.25 / 2)


# --------------------------------------------------------------------------
# bivariate functions


def test_hk3_origin():
    assert ml_hk3(MLParams3(1.3, 0.7, 2.1, 1.6, 2), 0.0, 0.0).value == pytest.approx(1.0 / math.gamma(1.6))


def test_hk3_exponential_reduction():
    res = ml_hk3(MLParams3(0.0, 1.0, 0.0, 1.0, 1), 0.0, 0.5)
    assert res.value == pytest.approx(math.exp(0.5), rel=1e-15)


def test_hk4_origin():
    p = MLParams4(1.3, 0.7, 2.1, 0.9, 1.4, 1.6, 2)
    assert ml_hk4(p, 0.0, 0.0).value == pytest.approx(1.0 / (math.gamma(1.4) * math.gamma(1.6)))


@pytest.mark.parametrize("g2, rho, k, y", [(0.7, 1.6, 2, 0.8), (-1.5, 2.0, 1, 1.3), (2.0, 0.5, 3, 0.6)])
def test_hk4_y_marginal_is_prabhakar(g2, rho, k, y):
    kappa = 1.4
    lhs = ml_hk4(MLParams4(0.0, g2, 0.0, 0.0, kappa, rho, k), 0.0, y).value
    rhs = ml_prabhakar(k, rho, g2, y ** k).value / math.gamma(kappa)
    assert lhs == pytest.approx(rhs, rel=1e-14)


@pytest.mark.parametrize("g1, g2", [(0.6, 1.2), (2.5, -0.5), (-3.0, 0.8)])
def test_hk4_collapses_to_cemo(g1, g2):
    kappa, rho, k, x, y = 1.3, 0.8, 2, 0.9, 0.7
    lhs = ml_hk4(MLParams4(g1, g2, g1 / 2, (g1 + 1) / 2, kappa, rho, k), x / 4, y).value
    cemo = ml_cemo(g2, kappa, rho, k, x, y).value
    ref = float(mp_double(lambda s, r: mpmath.rf(g2, s + r), kappa, rho, k, x, y))
    assert lhs == pytest.approx(ref, rel=1e-13)
    assert cemo == pytest.approx(ref, rel=1e-13)


@settings(max_examples=12, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0),
       st.floats(0.5, 2.5), st.integers(1, 3), st.floats(-0.8, 0.8), st.floats(0.0, 1.0))
def test_hk4_against_direct_double_sum(g1, g2, g3, g4, kappa, k, x, y):
    p = MLParams4(g1, g2, g3, g4, 1.2, kappa, k)
    ref = float(mp_double(hk4_coef(g1, g2, g3, g4), 1.2, kappa, k, x, y, S=30, R=30))
    assert ml_hk4(p, x, y).value == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_jk2_origin_and_direct_sum():
    kappa, rho, k = 1.4, 0.8, 2
    assert ml_jk2(0.5, 1.5, kappa, rho, k, 0.0, 0.0).value == pytest.approx(
        1.0 / (math.gamma(kappa) * math.gamma(rho)))
    ref = float(mp_double(lambda s, r: mpmath.rf(0.5, s + r) * mpmath.rf(1.5, s), kappa, rho, k, 0.3, 0.5))
    assert ml_jk2(0.5, 1.5, kappa, rho, k, 0.3, 0.5).value == pytest.approx(ref, rel=1e-13)


def test_kdf_empty_lists_is_exponential():
    assert kdf_series(KdFParams(), 0.4, 1.1).value == pytest.approx(math.exp(1.5), rel=1e-15)


def test_kdf_terminating_joint_parameter():
    res = kdf_series(KdFParams(upper_joint=(-1.0,)), 0.4, 1.1)
    assert res.terminated
    assert res.value == pytest.approx(1.0 - 1.5)


def test_terminating_series_has_no_error_estimate():
    res = ml_hk4(MLParams4(-4.0, -4.0, -1.5, -4.0, 1.5, 2.0, 2), 0.3, 0.6)
    assert res.terminated and res.abs_error_est == 0.0


def test_nonterminating_pole_is_reported():
    # (c)_s in a denominator vanishing inside an unbounded series
    with pytest.raises(NonterminatingPoleError):
        ml_hk3(MLParams3(0.5, 0.7, -1.0, 1.0, 1), 0.4, 0.3)


def test_shift_support_continues_past_nonpositive_parameter():
    # (a+s)_r with a = -2: the r-range stops only while s <= 2 and the
    # s-range itself is unbounded, so no diagonal bound may be imposed
    m = DoubleHypergeometric.simplified(s_upper=(0.5,), s_lower=(-2.0,), j_upper=(-2.0,))
    assert m.support()[2] is None
    assert m.coefficient(3, 1) != 0


def test_evaluate_matches_scalar_calls():
    # the 1/Gamma(kappa + s) factor keeps a nonterminating g1 convergent
    series = BivariateML(hk4_model(0.8, 0.6, 1.4, 1.1), k=2, kappa=1.2, rho=1.3)
    xs = np.array([0.1, -0.4, 0.7])
    ys = np.array([0.2, 0.9, 0.5])
    vec = series.evaluate(xs, ys)
    ref = [series(a, b).value for a, b in zip(xs, ys)]
    assert np.allclose(vec, ref, rtol=1e-14, atol=0)


def test_grid_matches_evaluate():
    series = BivariateML(hk4_model(-2.0, 1.5, 0.7, 1.1), k=1, kappa=1.2, rho=0.9)
    xs = np.array([0.1, 0.5])
    ys = np.array([0.2, 0.4, 0.8])
    g = series.grid(xs, ys)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    assert np.allclose(g, series.evaluate(X, Y), rtol=1e-14, atol=0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        MLParams3(1.0, 1.0, 1.0, 0.0, 1)
    with pytest.raises(ValueError):
        MLParams4(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0)
    with pytest.raises(ValueError):
        ml_prabhakar(0.0, 1.0, 1.0, 0.5)
