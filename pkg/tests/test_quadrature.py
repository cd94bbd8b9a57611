import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hkfrac import biorthogonal as B
from hkfrac import polynomials as P
from hkfrac.quadrature import (
    biorthogonality_matrix,
    build_rule,
    inner_product_2d,
    pair_ratios,
    rule_size_for_degree,
    total_weight,
)


def test_one_point_rules():
    h = build_rule("hermite", 1)
    assert h.nodes[0] == 0.0 and h.weights[0] == pytest.approx(math.sqrt(math.pi))
    lg = build_rule("laguerre", 1, 0.0)
    assert lg.nodes[0] == 1.0 and lg.weights[0] == pytest.approx(1.0)


@pytest.mark.parametrize("n", [5, 20, 40])
def test_hermite_rule_matches_scipy(n):
    rule = build_rule("hermite", n)
    x, w = special.roots_hermite(n)
    assert np.allclose(rule.nodes, x, rtol=1e-13, atol=1e-13)
    assert np.allclose(rule.weights, w, rtol=1e-11, atol=1e-300)


@pytest.mark.parametrize("n, alpha", [(6, 0.0), (20, 0.5), (30, 2.0), (12, -0.5)])
def test_laguerre_rule_matches_scipy(n, alpha):
    rule = build_rule("laguerre", n, alpha)
    x, w = special.roots_genlaguerre(n, alpha)
    assert np.allclose(rule.nodes, x, rtol=1e-12)
    assert np.allclose(rule.weights, w, rtol=1e-10, atol=1e-300)


@pytest.mark.parametrize("n, a, b", [(8, 0.0, 0.0), (16, -0.5, 0.5), (24, 1.5, -0.3)])
def test_jacobi_rule_matches_scipy(n, a, b):
    rule = build_rule("jacobi", n, a, b)
    x, w = special.roots_jacobi(n, a, b)
    assert np.allclose(rule.nodes, x, rtol=1e-12, atol=1e-14)
    assert np.allclose(rule.weights, w, rtol=1e-9)


def test_jacobi_rule_near_singular_weight():
    # scipy's roots_jacobi loses ~5 digits here, so exact moments are the oracle
    a, b = 0.0, -1.0 + 1e-9
    rule = build_rule("jacobi", 10, a, b)
    for p in (3, 7, 12):
        exact = 2.0 ** (a + b + p + 1) * math.exp(
            math.lgamma(a + 1) + math.lgamma(b + p + 1) - math.lgamma(a + b + p + 2))
        assert rule.integrate((1.0 + rule.nodes) ** p) == pytest.approx(exact, rel=1e-12)


@settings(max_examples=40)
@given(st.integers(0, 30), st.floats(-0.9, 3.0))
def test_laguerre_exact_for_moments(p, alpha):
    # int_0^inf t^p t^alpha e^-t dt = Gamma(p + alpha + 1)
    rule = build_rule("laguerre", rule_size_for_degree(p), alpha)
    assert rule.integrate(rule.nodes ** p) == pytest.approx(math.gamma(p + alpha + 1.0), rel=1e-11)


@settings(max_examples=40)
@given(st.integers(0, 20), st.floats(-0.9, 2.0), st.floats(-0.9, 2.0))
def test_jacobi_total_weight_and_moments(p, a, b):
    rule = build_rule("jacobi", rule_size_for_degree(p), a, b)
    assert rule.weights.sum() == pytest.approx(total_weight("jacobi", (a, b)), rel=1e-12)
    # moment of (1 + x)^p equals 2^(a+b+p+1) B(a+1, b+p+1)
    exact = 2.0 ** (a + b + p + 1) * math.exp(
        math.lgamma(a + 1) + math.lgamma(b + p + 1) - math.lgamma(a + b + p + 2))
    assert rule.integrate((1.0 + rule.nodes) ** p) == pytest.approx(exact, rel=1e-11)


def test_inner_product_of_constants():
    rho = 0.7
    rx = build_rule("hermite", 4)
    ry = build_rule("laguerre", 4, rho)
    one = lambda x, y: np.ones_like(x)
    assert inner_product_2d(one, one, rx, ry) == pytest.approx(math.sqrt(math.pi) * math.gamma(rho + 1))
    assert inner_product_2d(one, one, rx, ry, lambda x, y: 1.0) == pytest.approx(
        math.sqrt(math.pi) * math.gamma(rho + 1))


def test_pair_ratios_normalization():
    m = np.array([[1.0, 1e-3], [2.0, 100.0]])
    r = pair_ratios(m)
    assert r[0, 1] == pytest.approx(1e-5) and r[1, 0] == pytest.approx(0.02)
    assert r[0, 0] == 0.0 and r[1, 1] == 0.0


def test_rule_validation():
    with pytest.raises(ValueError):
        build_rule("hermite", 0)
    with pytest.raises(ValueError):
        build_rule("laguerre", 4, -1.5)
    with pytest.raises(ValueError):
        build_rule("chebyshev", 4)


# --------------------------------------------------------------------------
# biorthogonality


@pytest.mark.parametrize("rho, k", [(0.0, 1), (0.5, 2), (2.0, 3)])
def test_hk2d_biorthogonality_matrix(rho, k):
    n_max = 6
    rx = build_rule("hermite", rule_size_for_degree(2 * n_max))
    ry = build_rule("laguerre", rule_size_for_degree((k + 1) * n_max), rho)
    rep = biorthogonality_matrix(lambda n, X, Y: P.hk2d(P.HK2DParams(n, rho, k), X, Y),
                                 lambda m, X, Y: P.hk2d_partner(m, rho, k, X, Y), n_max, rx, ry)
    expect = [2.0 ** n * math.factorial(n) * math.sqrt(math.pi) for n in range(n_max + 1)]
    assert np.allclose(np.diag(rep.matrix), expect, rtol=1e-12, atol=0)
    assert rep.dominance <= 1e-10


def test_hk2d_diagonal_up_to_four():
    rep = B.certify(B.hermite_konhauser_spec(0.0, 2), 4, pairing="hermite")
    expect = np.array([1, 2, 8, 48, 384]) * math.sqrt(math.pi)
    assert np.allclose(np.diag(rep.matrix), expect, rtol=1e-12)


def test_degree_zero_matrix():
    rep = B.certify(B.hermite_konhauser_spec(0.5, 2), 0)
    assert rep.matrix.shape == (1, 1) and rep.matrix[0, 0] > 0
    assert rep.matrix[0, 0] == pytest.approx(math.sqrt(math.pi))


def test_univariate_konhauser_pair():
    rho, k, n_max = 0.5, 2, 6
    rule = build_rule("laguerre", rule_size_for_degree((k + 1) * n_max), rho)
    Z = np.array([P.konhauser_z(n, rho, k, rule.nodes) for n in range(n_max + 1)])
    Y = np.array([P.konhauser_y(m, rho, k, rule.nodes) for m in range(n_max + 1)])
    mat = (Z * rule.weights) @ Y.T
    expect = [math.gamma(k * n + rho + 1) / math.factorial(n) for n in range(n_max + 1)]
    assert np.allclose(np.diag(mat), expect, rtol=1e-12)
    assert pair_ratios(mat).max() <= 1e-10


def test_hermite_pairing_reproduces_hk2d():
    spec = B.hermite_konhauser_spec(0.5, 2)
    Pe, _ = B.biorthogonal_construct(spec, pairing="hermite")
    x = np.array([-1.1, 0.3, 1.4])
    y = np.array([0.2, 1.0, 2.5])
    for n in range(6):
        ref = P.hk2d(P.HK2DParams(n, 0.5, 2), x, y)
        assert np.allclose(Pe(n, x, y), ref, rtol=1e-12, atol=1e-12)
    rep = B.certify(spec, 6, pairing="hermite")
    assert np.allclose(B.normalized(rep, spec), np.eye(7), atol=1e-11)


def test_theorem_pairing_is_one_sided():
    # with j = n - i the upper triangle vanishes but the lower one does not
    spec = B.laguerre_konhauser_spec(0.5, 1.0, 2)
    rep = B.certify(spec, 4)
    M = B.normalized(rep, spec)
    assert np.allclose(np.diag(M), 1.0, rtol=1e-12)
    assert rep.upper_ratio <= 1e-10
    assert rep.lower_ratio > 0.1


def test_hermite_pairing_rejects_mixed_parity():
    spec = B.laguerre_konhauser_spec(0.5, 1.0, 2)
    Pe, _ = B.biorthogonal_construct(spec, pairing="hermite")
    with pytest.raises(ValueError):
        Pe(1, np.array([0.5]), np.array([0.5]))


def test_jacobi_konhauser_partner_upper_triangle():
    rep = B.certify(B.jacobi_konhauser_spec(0.5, 1.0, 2), 5)
    assert rep.upper_ratio <= 1e-10
    assert np.all(np.abs(np.diag(rep.matrix)) > 0)
