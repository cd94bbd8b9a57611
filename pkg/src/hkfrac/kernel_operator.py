"""Double fractional integral operators with a bivariate Mittag-Leffler kernel.

For ``op = (g1, g2, g3, g4, kappa, rho, k, nu1, nu2, a, c)``::

    (I_op psi)(x, y) = int_c^y int_a^x (x-t)**(kappa-1) (y-w)**(rho-1)
                       E^{(g1;g2;g3;g4)}_{kappa,rho,k}(nu1 (x-t), nu2 (y-w)) psi(t, w) dt dw

Expanding the kernel gives ``sum_{s,r} c_sr nu1**s nu2**(k r) I_x^{kappa+s} I_y^{rho+k r}``,
which is how :func:`ml_kernel_apply_series` acts on :class:`GPSeries2D`
inputs. :func:`ml_kernel_apply` integrates the kernel numerically instead.

On the pattern ``g3 = (g1+1)/2, g4 = g2`` the operators form a semigroup:
parameters add together with the orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import kernels
from .core import DEFAULT_CONTROL, SeriesControl
from .fractional import GPSeries2D, _jacobi_rule, _log_gamma_ratio, rl_derivative_2d
from .mittag_leffler import BivariateML, hk4_model
from .polynomials import ModHK2DParams, hk2d_modified


@dataclass(frozen=True)
class KernelOpParams:
    g1: float
    g2: float
    g3: float
    g4: float
    kappa: float
    rho: float
    k: int = 1
    nu1: float = 1.0
    nu2: float = 1.0
    a: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if not (self.kappa > 0 and self.rho > 0):
            raise ValueError("kernel orders kappa and rho must be > 0")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")

    def series(self) -> BivariateML:
        return BivariateML(hk4_model(self.g1, self.g2, self.g3, self.g4), k=self.k,
                           kappa=self.kappa, rho=self.rho)

    @property
    def is_pattern(self) -> bool:
        return math.isclose(self.g3, (self.g1 + 1.0) / 2.0, abs_tol=1e-14) and math.isclose(
            self.g4, self.g2, abs_tol=1e-14)


def pattern_params(g1: float, g2: float, kappa: float, rho: float, k: int = 1, nu1: float = 1.0,
                   nu2: float = 1.0, a: float = 0.0, c: float = 0.0) -> KernelOpParams:
    """Operator with ``g3 = (g1+1)/2`` and ``g4 = g2``."""
    return KernelOpParams(g1, g2, (g1 + 1.0) / 2.0, g2, kappa, rho, k, nu1, nu2, a, c)


def compose(op1: KernelOpParams, op2: KernelOpParams) -> KernelOpParams:
    """Single operator equal to ``I_op1 I_op2`` on the semigroup pattern."""
    if not (op1.is_pattern and op2.is_pattern):
        raise ValueError("composition rule needs g3 = (g1+1)/2 and g4 = g2 on both operators")
    if (op1.k, op1.nu1, op1.nu2, op1.a, op1.c) != (op2.k, op2.nu1, op2.nu2, op2.a, op2.c):
        raise ValueError("operators must share k, nu1, nu2 and the base point")
    return pattern_params(op1.g1 + op2.g1, op1.g2 + op2.g2, op1.kappa + op2.kappa,
                          op1.rho + op2.rho, op1.k, op1.nu1, op1.nu2, op1.a, op1.c)


def negated(op: KernelOpParams, sigma: Optional[float] = None,
            eta: Optional[float] = None) -> KernelOpParams:
    """Pattern operator with ``-g1, -g2`` and orders ``(sigma, eta)``."""
    if not op.is_pattern:
        raise ValueError("negation is defined on the semigroup pattern only")
    sigma = op.kappa if sigma is None else sigma
    eta = op.rho if eta is None else eta
    return pattern_params(-op.g1, -op.g2, sigma, eta, op.k, op.nu1, op.nu2, op.a, op.c)


class KernelTable:
    """Cached kernel ``E(nu1 u, nu2 v)`` for ``0 <= u <= X``, ``0 <= v <= Y``."""

    def __init__(self, op: KernelOpParams, X: float, Y: float, ctrl: SeriesControl = DEFAULT_CONTROL):
        self.op = op
        series = op.series()
        ms, mr = series.truncation(abs(op.nu1) * X, abs(op.nu2) * Y, ctrl)
        self.coef = series.table(ms, mr)
        self.ex = np.arange(ms + 1)
        self.ey = op.k * np.arange(mr + 1)

    def grid(self, us, vs) -> np.ndarray:
        return kernels.double_power_grid(self.coef, self.ex, self.ey,
                                         self.op.nu1 * np.asarray(us, dtype=float),
                                         self.op.nu2 * np.asarray(vs, dtype=float))


def ml_kernel_apply(op: KernelOpParams, psi: Callable, x: float, y: float, N: int = 24,
                    lower_exponents: Tuple[float, float] = (0.0, 0.0),
                    table: Optional[KernelTable] = None) -> float:
    """Numerical value of ``(I_op psi)(x, y)`` by tensor Gauss-Jacobi quadrature.

    ``lower_exponents = (p, q)`` declares ``psi ~ (t-a)**p (w-c)**q`` near the
    lower corner; those powers go into the quadrature weight.
    """
    hx = (x - op.a) / 2.0
    hy = (y - op.c) / 2.0
    if hx <= 0 or hy <= 0:
        return 0.0
    px, py = lower_exponents
    rx = _jacobi_rule(N, op.kappa - 1.0, px)
    ry = _jacobi_rule(N, op.rho - 1.0, py)
    t = op.a + hx * (1.0 + rx.nodes)
    w = op.c + hy * (1.0 + ry.nodes)
    T, W = np.meshgrid(t, w, indexing="ij")
    g = np.asarray(psi(T, W), dtype=float) / ((T - op.a) ** px * (W - op.c) ** py)
    if table is None:
        table = KernelTable(op, 2.0 * hx, 2.0 * hy)
    E = table.grid(hx * (1.0 - rx.nodes), hy * (1.0 - ry.nodes))
    total = kernels.weighted_grid_sum(rx.weights, ry.weights, E * g)
    return hx ** (op.kappa + px) * hy ** (op.rho + py) * total


def ml_kernel_apply_series(op: KernelOpParams, F: GPSeries2D,
                           extent: Optional[Tuple[float, float]] = None,
                           ctrl: SeriesControl = DEFAULT_CONTROL) -> GPSeries2D:
    """Exact termwise image of a :class:`GPSeries2D`.

    A terminating kernel gives the exact image. Otherwise the kernel series is
    cut so that the image is resolved to ``ctrl.rel_tol`` on
    ``x - a <= extent[0]``, ``y - c <= extent[1]``.
    """
    if F.base != (op.a, op.c):
        raise ValueError("series base must equal the operator base point")
    series = op.series()
    support = series.model.support()
    finite = support[2] is not None or (support[0] is not None and support[1] is not None)
    if not finite and extent is None:
        raise ValueError("non-terminating kernel: pass extent=(X, Y) for truncation")
    X, Y = extent if extent is not None else (0.0, 0.0)
    out = []
    for s, r, wgt in _significant_terms(op, series, X, Y, ctrl, finite):
        base = wgt * op.nu1 ** s * op.nu2 ** (op.k * r)
        ox = op.kappa + s
        oy = op.rho + op.k * r
        for cf, bx, by in F.terms:
            out.append((cf * base * _log_gamma_ratio(bx, bx + ox) * _log_gamma_ratio(by, by + oy),
                        bx + ox, by + oy))
    return GPSeries2D(F.base, tuple(out))


def _significant_terms(op, series, X, Y, ctrl, finite):
    """Kernel indices ``(s, r, c_sr)`` that matter on ``[0, X] x [0, Y]``."""
    ms, mr = series.truncation(abs(op.nu1) * X, abs(op.nu2) * Y, ctrl)
    entries = []
    for s in range(ms + 1):
        for r in range(mr + 1):
            c = series.model.coefficient(s, r)
            if c != 0:
                mag = float(abs(series.weight(s, r))) * (abs(op.nu1) * X) ** s * (abs(op.nu2) * Y) ** (op.k * r)
                entries.append((s, r, float(c), mag))
    if finite:
        return [(s, r, c) for s, r, c, _ in entries]
    total = sum(e[3] for e in entries)
    # drop terms far below the resolution of the sum
    cut = 1e-3 * ctrl.rel_tol * total
    return [(s, r, c) for s, r, c, m in entries if m >= cut]


def semigroup_check(op1: KernelOpParams, op2: KernelOpParams, psi, x: float, y: float,
                    mode: str = "series", N: int = 20,
                    lower_exponents: Tuple[float, float] = (0.0, 0.0)) -> Tuple[float, float]:
    """``((I_op1 I_op2 psi)(x, y), (I_{op1+op2} psi)(x, y))``.

    ``mode="series"`` needs ``psi`` as a :class:`GPSeries2D`; ``mode="numeric"``
    takes a callable and nests :func:`ml_kernel_apply`.
    """
    both = compose(op1, op2)
    ext = (x - op1.a, y - op1.c)
    if mode == "series":
        inner = ml_kernel_apply_series(op2, psi, ext)
        lhs = ml_kernel_apply_series(op1, inner, ext)(x, y)
        rhs = ml_kernel_apply_series(both, psi, ext)(x, y)
        return float(lhs), float(rhs)
    if mode != "numeric":
        raise ValueError("mode must be 'series' or 'numeric'")
    f = psi if callable(psi) else (lambda t, w: psi(t, w))
    t2 = KernelTable(op2, *ext)
    px, py = lower_exponents

    def inner_fn(T, W):
        vals = np.empty(T.shape)
        for idx in np.ndindex(T.shape):
            vals[idx] = ml_kernel_apply(op2, f, T[idx], W[idx], N, lower_exponents, t2)
        return vals

    lhs = ml_kernel_apply(op1, inner_fn, x, y, N, (px + op2.kappa, py + op2.rho))
    rhs = ml_kernel_apply(both, f, x, y, N, lower_exponents)
    return lhs, rhs


def ml_kernel_left_inverse(op: KernelOpParams, f: GPSeries2D, sigma: Optional[float] = None,
                           eta: Optional[float] = None,
                           extent: Optional[Tuple[float, float]] = None) -> GPSeries2D:
    """Recover ``psi`` from ``f = I_op psi``.

    The negated operator with orders ``(sigma, eta)`` turns ``f`` into a plain
    double integral of orders ``(kappa+sigma, rho+eta)``, which RL derivatives
    of the same orders undo.
    """
    neg = negated(op, sigma, eta)
    g = ml_kernel_apply_series(neg, f, extent)
    return rl_derivative_2d(g, op.kappa + neg.kappa, op.rho + neg.rho)


def l1_bound_constant(op: KernelOpParams, b: float, d: float) -> float:
    """``K`` with ``||I_op psi||_1 <= K ||psi||_1`` on ``[a, b] x [c, d]``."""
    L1 = b - op.a
    L2 = d - op.c
    if not (L1 > 0 and L2 > 0):
        raise ValueError("domain must satisfy b > a and d > c")
    absolute = BivariateML(op.series().model.abs_version(), k=op.k,
                           kappa=op.kappa + 1.0, rho=op.rho + 1.0)
    total = absolute(abs(op.nu1) * L1, abs(op.nu2) * L2).value
    return float(total) * L1 ** op.kappa * L2 ** op.rho


# --------------------------------------------------------------------------
# integral equation with a modified Hermite-Konhauser kernel


def _check_even(n: int):
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    if n % 2:
        # for odd n the kernel polynomial is not the terminating pattern series
        raise ValueError("odd n: kernel is not a Mittag-Leffler pattern operator")


def modified_kernel(n: int, kappa: float, rho: float, k: int, nu1: float, nu2: float, u, v):
    """``u**(kappa+n/2) v**rho H_n^{kappa,rho;(1-n)/2}(nu1 / (2 sqrt(u)), nu2 v)`` for ``u > 0``."""
    p = ModHK2DParams(n, kappa, rho, (1.0 - n) / 2.0, k)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u ** (kappa + n / 2.0) * v ** rho * hk2d_modified(p, nu1 / (2.0 * np.sqrt(u)), nu2 * v)


def equation_operator(n: int, kappa: float, rho: float, k: int, nu1: float, nu2: float,
                      a: float = 0.0, c: float = 0.0) -> Tuple[float, KernelOpParams]:
    """``(scale, op)`` with ``scale * I_op`` equal to the integral operator of
    :func:`modified_kernel`."""
    _check_even(n)
    return nu1 ** n, pattern_params(-n, -n, kappa + 1.0, rho + 1.0, k, -1.0 / nu1 ** 2, nu2, a, c)


def apply_equation(phi: GPSeries2D, n: int, kappa: float, rho: float, k: int, nu1: float,
                   nu2: float) -> GPSeries2D:
    """Left side ``theta`` of the integral equation for a given ``phi``."""
    scale, op = equation_operator(n, kappa, rho, k, nu1, nu2, *phi.base)
    return ml_kernel_apply_series(op, phi).scale(scale)


def solve_integral_equation(theta: GPSeries2D, n: int, kappa: float, rho: float, k: int,
                            nu1: float, nu2: float, zeta: float, mu: float,
                            extent: Tuple[float, float]) -> GPSeries2D:
    """Solution ``phi`` of ``apply_equation(phi, ...) = theta``.

    The auxiliary pattern operator with ``+n`` and orders
    ``(zeta - kappa - 1, mu - rho - 1)`` composes with the equation kernel
    into a plain double integral of orders ``(zeta, mu)``; RL derivatives of
    those orders finish the inversion.
    """
    scale, op = equation_operator(n, kappa, rho, k, nu1, nu2, *theta.base)
    if not (zeta > kappa + 1.0 and mu > rho + 1.0):
        raise ValueError("need zeta > kappa + 1 and mu > rho + 1")
    aux = pattern_params(n, n, zeta - kappa - 1.0, mu - rho - 1.0, k, op.nu1, nu2, *theta.base)
    g = ml_kernel_apply_series(aux, theta, extent)
    return rl_derivative_2d(g, zeta, mu).scale(1.0 / scale)
