"""Gaussian rules from the symmetric Jacobi matrix, and weighted inner products.

Nodes are eigenvalues of the tridiagonal recurrence matrix. Weights are the
Christoffel numbers ``1 / sum_k p_k(x_i)**2`` of the orthonormal recurrence,
which keeps tiny tail weights accurate in the relative sense (the first
eigenvector components of Golub-Welsch lose that for large rules).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import kernels


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for one of the classical weights.

    ``kind`` is ``"hermite"``, ``"laguerre"`` or ``"jacobi"``; ``params`` is
    ``()``, ``(alpha,)`` or ``(alpha, beta)`` respectively.
    """

    kind: str
    params: Tuple[float, ...]
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def total_weight(kind: str, params=()) -> float:
    if kind == "hermite":
        return math.sqrt(math.pi)
    if kind == "laguerre":
        (alpha,) = params
        return math.gamma(alpha + 1.0)
    if kind == "jacobi":
        a, b = params
        return math.exp(
            (a + b + 1.0) * math.log(2.0)
            + math.lgamma(a + 1.0)
            + math.lgamma(b + 1.0)
            - math.lgamma(a + b + 2.0)
        )
    raise ValueError(f"unknown rule kind {kind!r}")


def recurrence(kind: str, params, n: int):
    """Diagonal ``a_0..a_{n-1}`` and off-diagonal ``sqrt(b_1..b_{n-1})`` of the
    monic three-term recurrence for the weight."""
    k = np.arange(n, dtype=np.float64)
    if kind == "hermite":
        diag = np.zeros(n)
        off = np.sqrt(k[1:] / 2.0)
    elif kind == "laguerre":
        (alpha,) = params
        if not alpha > -1:
            raise ValueError("laguerre rule requires alpha > -1")
        diag = 2.0 * k + alpha + 1.0
        off = np.sqrt(k[1:] * (k[1:] + alpha))
    elif kind == "jacobi":
        a, b = params
        if not (a > -1 and b > -1):
            raise ValueError("jacobi rule requires alpha, beta > -1")
        ab = a + b
        diag = np.empty(n)
        diag[0] = (b - a) / (ab + 2.0)
        kk = k[1:]
        t = 2.0 * kk + ab
        diag[1:] = (b * b - a * a) / (t * (t + 2.0))
        m = k[1:]
        tm = 2.0 * m + ab
        num = 4.0 * m * (m + a) * (m + b) * (m + ab)
        den = tm * tm * (tm + 1.0) * (tm - 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            bvals = num / den
        if n > 1:
            # m = 1 has 0/0 when a + b in {0, -1}; closed form instead
            bvals[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
        off = np.sqrt(bvals)
    else:
        raise ValueError(f"unknown rule kind {kind!r}")
    return diag, off


def _christoffel_weights(nodes, diag, off, mu0):
    n = len(nodes)
    p_prev = np.zeros_like(nodes)
    p = np.full_like(nodes, 1.0 / math.sqrt(mu0))
    acc = p * p
    for j in range(n - 1):
        p_next = ((nodes - diag[j]) * p - (off[j - 1] if j > 0 else 0.0) * p_prev) / off[j]
        p_prev, p = p, p_next
        acc = acc + p * p
    return 1.0 / acc


def build_rule(kind: str, n: int, *params: float) -> QuadratureRule:
    """Gauss rule with ``n`` nodes, e.g. ``build_rule("jacobi", 12, -0.5, 0.0)``."""
    if n < 1:
        raise ValueError("rule size must be >= 1")
    params = tuple(float(p) for p in params)
    diag, off = recurrence(kind, params, n)
    mu0 = total_weight(kind, params)
    if n == 1:
        return QuadratureRule(kind, params, np.array([diag[0]]), np.array([mu0]))
    try:
        nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise QuadratureError(f"eigensolver failed for {kind}{params} with N={n}") from exc
    nodes = np.sort(nodes)
    if kind == "hermite":
        nodes = 0.5 * (nodes - nodes[::-1])
    weights = _christoffel_weights(nodes, diag, off, mu0)
    weights *= mu0 / weights.sum()
    return QuadratureRule(kind, params, nodes, weights)


def rule_size_for_degree(degree: int, margin: int = 2) -> int:
    """Nodes needed to integrate a polynomial of ``degree`` exactly, plus margin."""
    return max(1, math.ceil((degree + 1) / 2)) + margin


def inner_product_2d(
    f: Callable,
    g: Callable,
    rule_x: QuadratureRule,
    rule_y: QuadratureRule,
    extra_weight: Optional[Callable] = None,
) -> float:
    """Tensor-product quadrature of ``w_x w_y * extra * f * g``.

    ``f``, ``g`` and ``extra_weight`` are evaluated on the mesh arrays
    ``X[i, j], Y[i, j]`` and must broadcast.
    """
    xx, yy = np.meshgrid(rule_x.nodes, rule_y.nodes, indexing="ij")
    vals = np.asarray(f(xx, yy), dtype=np.float64) * np.asarray(g(xx, yy), dtype=np.float64)
    if extra_weight is not None:
        vals = vals * np.asarray(extra_weight(xx, yy), dtype=np.float64)
    vals = np.broadcast_to(vals, xx.shape)
    return kernels.weighted_grid_sum(rule_x.weights, rule_y.weights, vals)


@dataclass
class BiorthogonalityReport:
    matrix: np.ndarray
    dominance: float  # max of pair_ratios off the diagonal
    upper_ratio: float  # same, restricted to m > n
    lower_ratio: float  # same, restricted to m < n


def pair_ratios(mat: np.ndarray) -> np.ndarray:
    """``|M[n, m]| / max(|M[n, n]|, |M[m, m]|)``, zero on the diagonal.

    Diagonal entries can span many decades; an off-diagonal entry is rounding
    noise relative to the larger of the two diagonal entries it couples.
    """
    d = np.abs(np.diag(mat))
    out = np.abs(mat) / np.maximum.outer(d, d)
    np.fill_diagonal(out, 0.0)
    return out


def geometric_ratios(mat: np.ndarray) -> np.ndarray:
    """``|M[n, m]| / sqrt(|M[n, n] M[m, m]|)``, zero on the diagonal."""
    d = np.sqrt(np.abs(np.diag(mat)))
    out = np.abs(mat) / np.outer(d, d)
    np.fill_diagonal(out, 0.0)
    return out


def biorthogonality_matrix(
    P_eval: Callable,
    Q_eval: Callable,
    n_max: int,
    rule_x: QuadratureRule,
    rule_y: QuadratureRule,
    extra_weight: Optional[Callable] = None,
) -> BiorthogonalityReport:
    """Matrix of ``<P_n, Q_m>`` for ``n, m <= n_max``.

    ``P_eval(n, X, Y)`` and ``Q_eval(m, X, Y)`` are vectorised over mesh arrays.
    """
    xx, yy = np.meshgrid(rule_x.nodes, rule_y.nodes, indexing="ij")
    extra = 1.0 if extra_weight is None else np.asarray(extra_weight(xx, yy))
    ps = [np.asarray(P_eval(n, xx, yy), dtype=np.float64) * extra for n in range(n_max + 1)]
    qs = [np.asarray(Q_eval(m, xx, yy), dtype=np.float64) for m in range(n_max + 1)]
    size = n_max + 1
    mat = np.empty((size, size))
    for n in range(size):
        for m in range(size):
            mat[n, m] = kernels.weighted_grid_sum(
                rule_x.weights, rule_y.weights, np.broadcast_to(ps[n] * qs[m], xx.shape)
            )
    ratios = pair_ratios(mat)
    upper = np.triu(ratios, 1).max() if size > 1 else 0.0
    lower = np.tril(ratios, -1).max() if size > 1 else 0.0
    return BiorthogonalityReport(mat, max(upper, lower), upper, lower)
