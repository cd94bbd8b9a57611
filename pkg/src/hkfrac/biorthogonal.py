"""Bivariate biorthogonal pairs built from a univariate orthogonal family and a
univariate biorthogonal pair.

Given an orthogonal family ``K_n(x) = sum_i D[n, i] r(x)**i`` and a
biorthogonal pair ``R_j, S_j`` with ``<R_j, S_l> = J_j delta_jl``::

    P_n(x, y) = sum_i D[n, i] / J_{j(n,i)} * r(x)**i * R_{j(n,i)}(y)
    Q_n(x, y) = K_n(x) * sum_{l<=n} S_l(y)

The pairing ``j(n, i) = n - i`` is the construction as usually stated.
Then ``<P_n, Q_m>`` vanishes for ``m > n`` but in general not for ``m < n``.
For the Hermite family, whose coefficients only live on ``i = n - 2s``,
the pairing ``j = (n + i)/2`` gives a two-sided biorthogonal pair, and that
pair is the 2D Hermite-Konhauser family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from . import polynomials as poly
from .quadrature import BiorthogonalityReport, biorthogonality_matrix, build_rule, rule_size_for_degree

PAIRINGS = ("theorem", "hermite")


@dataclass(frozen=True)
class BiorthFamilySpec:
    """Ingredients of the construction.

    ``weight_x`` and ``weight_y`` are ``(kind, params)`` pairs understood by
    :func:`hkfrac.quadrature.build_rule`. ``degree_x(n)`` and ``degree_y(n)``
    bound the degrees of ``P_n``/``Q_n`` used to size quadrature rules.
    """

    name: str
    interval_x: Tuple[float, float]
    interval_y: Tuple[float, float]
    weight_x: Tuple[str, Tuple[float, ...]]
    weight_y: Tuple[str, Tuple[float, ...]]
    basic_map_r: Callable
    ortho_coeffs: Callable[[int, int], float]
    K_eval: Callable
    R_eval: Callable
    S_eval: Callable
    J_diag: Callable[[int], float]
    K_norm: Callable[[int], float]
    degree_x: Callable[[int], int]
    degree_y: Callable[[int], int]


def _partner_index(pairing: str, n: int, i: int):
    if pairing == "theorem":
        return n - i
    if pairing == "hermite":
        if (n + i) % 2:
            return None
        return (n + i) // 2
    raise ValueError(f"unknown pairing {pairing!r}; choose from {PAIRINGS}")


def biorthogonal_construct(spec: BiorthFamilySpec, pairing: str = "theorem"):
    """Return ``(P_eval, Q_eval)``, each called as ``f(n, x, y)`` on broadcast arrays.

    Raises
    ------
    ValueError
        If a required ``J_diag`` value is zero, or the ``hermite`` pairing
        meets a non-zero coefficient with ``n + i`` odd.
    """
    if pairing not in PAIRINGS:
        raise ValueError(f"unknown pairing {pairing!r}; choose from {PAIRINGS}")

    def P_eval(n, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        rx = np.asarray(spec.basic_map_r(x), dtype=float)
        total = np.zeros(x.shape)
        for i in range(n + 1):
            d = float(spec.ortho_coeffs(n, i))
            if d == 0.0:
                continue
            j = _partner_index(pairing, n, i)
            if j is None:
                raise ValueError(f"pairing {pairing!r} needs D[{n},{i}] = 0 for odd n + i")
            jd = spec.J_diag(j)
            if jd == 0:
                raise ValueError(f"J_diag({j}) vanishes; construction undefined for n={n}")
            total = total + (d / jd) * rx ** i * spec.R_eval(j, y)
        return total

    def Q_eval(n, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        acc = np.zeros(y.shape)
        for j in range(n + 1):
            acc = acc + spec.S_eval(j, y)
        return spec.K_eval(n, x) * acc

    return P_eval, Q_eval


def certify(spec: BiorthFamilySpec, n_max: int, pairing: str = "theorem") -> BiorthogonalityReport:
    """Quadrature matrix ``<P_n, Q_m>`` with rules exact for the degrees involved."""
    P, Q = biorthogonal_construct(spec, pairing)
    dx = spec.degree_x(n_max) * 2
    dy = spec.degree_y(n_max)
    kind_x, px = spec.weight_x
    kind_y, py = spec.weight_y
    rule_x = build_rule(kind_x, rule_size_for_degree(dx), *px)
    rule_y = build_rule(kind_y, rule_size_for_degree(dy), *py)
    return biorthogonality_matrix(P, Q, n_max, rule_x, rule_y)


def normalized(report: BiorthogonalityReport, spec: BiorthFamilySpec) -> np.ndarray:
    """Matrix rows divided by ``K_norm(n)``."""
    norms = np.array([spec.K_norm(n) for n in range(report.matrix.shape[0])])
    return report.matrix / norms[:, None]


# --------------------------------------------------------------------------
# built-in families


def _hermite_D(n, i):
    if (n - i) % 2:
        return 0.0
    return float(poly.hermite_coefficients(n)[(n - i) // 2])


def hermite_konhauser_spec(rho: float, k: int) -> BiorthFamilySpec:
    return BiorthFamilySpec(
        name=f"hermite-konhauser(rho={rho}, k={k})",
        interval_x=(-math.inf, math.inf),
        interval_y=(0.0, math.inf),
        weight_x=("hermite", ()),
        weight_y=("laguerre", (rho,)),
        basic_map_r=lambda x: 2.0 * x,
        ortho_coeffs=_hermite_D,
        K_eval=poly.hermite,
        R_eval=lambda j, y: poly.konhauser_z(j, rho, k, y),
        S_eval=lambda j, y: poly.konhauser_y(j, rho, k, y),
        J_diag=lambda j: math.gamma(k * j + rho + 1.0) / math.factorial(j),
        K_norm=lambda n: 2.0 ** n * math.factorial(n) * math.sqrt(math.pi),
        degree_x=lambda n: n,
        degree_y=lambda n: (k + 1) * n,
    )


def _laguerre_D(alpha):
    def D(n, i):
        return (-1) ** i * math.exp(
            math.lgamma(n + alpha + 1.0) - math.lgamma(alpha + i + 1.0)
        ) / (math.factorial(n - i) * math.factorial(i))

    return D


def laguerre_konhauser_spec(kappa: float, rho: float, k: int) -> BiorthFamilySpec:
    return BiorthFamilySpec(
        name=f"laguerre-konhauser(kappa={kappa}, rho={rho}, k={k})",
        interval_x=(0.0, math.inf),
        interval_y=(0.0, math.inf),
        weight_x=("laguerre", (kappa,)),
        weight_y=("laguerre", (rho,)),
        basic_map_r=lambda x: x,
        ortho_coeffs=_laguerre_D(kappa),
        K_eval=lambda n, x: poly.laguerre(n, kappa, x),
        R_eval=lambda j, y: poly.konhauser_z(j, rho, k, y),
        S_eval=lambda j, y: poly.konhauser_y(j, rho, k, y),
        J_diag=lambda j: math.gamma(k * j + rho + 1.0) / math.factorial(j),
        K_norm=lambda n: math.gamma(n + kappa + 1.0) / math.factorial(n),
        degree_x=lambda n: n,
        degree_y=lambda n: (k + 1) * n,
    )


def _jacobi_D(alpha, beta):
    def D(n, i):
        # coefficient of ((1-x)/2)**i in P_n^(alpha, beta)
        return (
            math.exp(math.lgamma(alpha + 1.0 + n) - math.lgamma(alpha + 1.0 + i))
            * _poch_float(-n, i) * _poch_float(n + alpha + beta + 1.0, i)
            / (math.factorial(n) * math.factorial(i))
        )

    return D


def _poch_float(a, n):
    out = 1.0
    for i in range(n):
        out *= a + i
    return out


def _jacobi_norm(alpha, beta):
    def norm(n):
        return math.exp(
            (alpha + beta + 1.0) * math.log(2.0)
            + math.lgamma(n + alpha + 1.0) + math.lgamma(n + beta + 1.0)
            - math.lgamma(n + alpha + beta + 1.0) - math.lgamma(n + 1.0)
        ) / (2 * n + alpha + beta + 1.0)

    return norm


def jacobi_konhauser_spec(alpha: float, rho: float, k: int) -> BiorthFamilySpec:
    """Jacobi weight ``(1-x)**alpha (1+x)**rho`` in ``x``, Konhauser pair in ``y``.

    With this choice ``P_n`` is exactly :func:`hkfrac.polynomials.jk2d`.
    """
    return BiorthFamilySpec(
        name=f"jacobi-konhauser(alpha={alpha}, rho={rho}, k={k})",
        interval_x=(-1.0, 1.0),
        interval_y=(0.0, math.inf),
        weight_x=("jacobi", (alpha, rho)),
        weight_y=("laguerre", (rho,)),
        basic_map_r=lambda x: (1.0 - x) / 2.0,
        ortho_coeffs=_jacobi_D(alpha, rho),
        K_eval=lambda n, x: poly.jacobi(n, alpha, rho, x),
        R_eval=lambda j, y: poly.konhauser_z(j, rho, k, y),
        S_eval=lambda j, y: poly.konhauser_y(j, rho, k, y),
        J_diag=lambda j: math.gamma(k * j + rho + 1.0) / math.factorial(j),
        K_norm=_jacobi_norm(alpha, rho),
        degree_x=lambda n: n,
        degree_y=lambda n: (k + 1) * n,
    )


def laguerre_laguerre_spec(kappa: float, rho: float) -> BiorthFamilySpec:
    """Orthogonal Laguerre families on both axes (``R = S``)."""
    return BiorthFamilySpec(
        name=f"laguerre-laguerre(kappa={kappa}, rho={rho})",
        interval_x=(0.0, math.inf),
        interval_y=(0.0, math.inf),
        weight_x=("laguerre", (kappa,)),
        weight_y=("laguerre", (rho,)),
        basic_map_r=lambda x: x,
        ortho_coeffs=_laguerre_D(kappa),
        K_eval=lambda n, x: poly.laguerre(n, kappa, x),
        R_eval=lambda j, y: poly.laguerre(j, rho, y),
        S_eval=lambda j, y: poly.laguerre(j, rho, y),
        J_diag=lambda j: math.gamma(j + rho + 1.0) / math.factorial(j),
        K_norm=lambda n: math.gamma(n + kappa + 1.0) / math.factorial(n),
        degree_x=lambda n: n,
        degree_y=lambda n: 2 * n,
    )


BUILTIN_SPECS = {
    "hermite-konhauser": hermite_konhauser_spec,
    "laguerre-konhauser": laguerre_konhauser_spec,
    "jacobi-konhauser": jacobi_konhauser_spec,
    "laguerre-laguerre": laguerre_laguerre_spec,
}
