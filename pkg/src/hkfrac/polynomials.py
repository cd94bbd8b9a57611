"""Univariate families and the explicit 2D Hermite-Konhauser and Jacobi-Konhauser polynomials.

Every polynomial is evaluated from its explicit finite sum. Bivariate sums
are turned into a coefficient table ``C[s, r]`` with integer exponent
vectors and handed to :func:`hkfrac.kernels.double_power_sum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .core import ParameterPoleError, gamma_recip, pochhammer, pochhammer_ratio
from .mittag_leffler import (
    LD,
    BivariateML,
    MLParams3,
    MLParams4,
    hk3_model,
    hk4_model,
    jk2_model,
    kdf_model,
    KdFParams,
    _RecipGamma,
    ld_factorial,
)


def _poch(a, n):
    return pochhammer(LD(a), n)


def _poch_exact(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


def _fraction_to_ld(q: Fraction):
    with localcontext() as ctx:
        ctx.prec = 30
        return LD(str(Decimal(q.numerator) / Decimal(q.denominator)))


class SingularArgumentError(ValueError):
    """A representation divides by an argument that is zero."""


def _as_array(x):
    return np.asarray(x, dtype=np.float64)


def _poly1d(coefs, exps, t):
    """``sum coefs[i] * t**exps[i]`` elementwise, with ``0**0 = 1``."""
    t = _as_array(t)
    flat = t.ravel()
    coef = np.asarray(coefs, dtype=LD).reshape(-1, 1)
    out = kernels.double_power_sum(coef, np.asarray(exps), np.zeros(1, dtype=np.int64),
                                   flat, np.ones_like(flat))
    out = out.reshape(t.shape)
    return out if out.ndim else float(out)


def _bivariate(coef, ex, ey, x, y):
    x, y = np.broadcast_arrays(_as_array(x), _as_array(y))
    out = kernels.double_power_sum(np.asarray(coef, dtype=LD), np.asarray(ex),
                                   np.asarray(ey), x.ravel(), y.ravel())
    out = out.reshape(x.shape)
    return out if out.ndim else float(out)


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    return int(n)


def _check_k(k):
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return int(k)


# --------------------------------------------------------------------------
# univariate families


def hermite_coefficients(n: int):
    """Coefficients of ``(2x)**(n-2s)``, ``s = 0..n//2``."""
    n = _check_degree(n)
    return [(-1) ** s * _poch(-n, 2 * s) / ld_factorial(s) for s in range(n // 2 + 1)]


def hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)``."""
    n = _check_degree(n)
    coefs = hermite_coefficients(n)
    exps = [n - 2 * s for s in range(len(coefs))]
    return _poly1d(coefs, exps, 2.0 * _as_array(x))


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)``."""
    n = _check_degree(n)
    if not alpha > -1:
        raise ValueError("laguerre requires alpha > -1")
    coefs = [
        (-1) ** j * _poch(LD(alpha) + j + 1, n - j) / (ld_factorial(n - j) * ld_factorial(j))
        for j in range(n + 1)
    ]
    return _poly1d(coefs, list(range(n + 1)), x)


def jacobi(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial ``P_n^(alpha, beta)(x)`` in powers of ``(1 - x)/2``."""
    n = _check_degree(n)
    if not (alpha > -1 and beta > -1):
        raise ValueError("jacobi requires alpha, beta > -1")
    ab1 = LD(alpha) + LD(beta) + (n + 1)
    # (alpha+1)_n / ((alpha+1)_s n!) = (alpha+1+s)_{n-s} / n!
    coefs = [
        _poch(-n, s) * _poch(ab1, s) * _poch(LD(alpha) + 1 + s, n - s)
        / (ld_factorial(s) * ld_factorial(n))
        for s in range(n + 1)
    ]
    return _poly1d(coefs, list(range(n + 1)), (1.0 - _as_array(x)) / 2.0)


def konhauser_z_coefficients(n: int, rho: float, k: int):
    """Coefficients of ``t**(k r)``, ``r = 0..n``."""
    n = _check_degree(n)
    k = _check_k(k)
    if not rho > -1:
        raise ValueError("konhauser_z requires rho > -1")
    # Gamma(1+rho+kn) / Gamma(1+rho+kr) = (1+rho+kr)_{k(n-r)}
    return [
        _poch(-n, r) * _poch(LD(rho) + 1 + k * r, k * (n - r))
        / (ld_factorial(n) * ld_factorial(r))
        for r in range(n + 1)
    ]


def konhauser_z(n: int, rho: float, k: int, t):
    """Konhauser polynomial ``Z_n^rho(t; k)`` of degree ``k n`` in ``t``."""
    coefs = konhauser_z_coefficients(n, rho, k)
    return _poly1d(coefs, [k * r for r in range(n + 1)], t)


def konhauser_y_coefficients(n: int, rho: float, k: int):
    """Coefficients of ``t**i``, ``i = 0..n``."""
    return list(_konhauser_y_coefficients(_check_degree(n), float(rho), _check_k(k)))


@lru_cache(maxsize=256)
def _konhauser_y_coefficients(n: int, rho: float, k: int):
    k = _check_k(k)
    if not rho > -1:
        raise ValueError("konhauser_y requires rho > -1")
    # the inner alternating sum is an i-th finite difference and cancels
    # catastrophically; a binary float rho is an exact rational, so sum exactly
    rho_q = Fraction(rho)
    out = []
    for i in range(n + 1):
        inner = Fraction(0)
        for j in range(i + 1):
            inner += (-1) ** j * math.comb(i, j) * _poch_exact((rho_q + j + 1) / k, n)
        out.append(_fraction_to_ld(inner / (math.factorial(n) * math.factorial(i))))
    return tuple(out)


def konhauser_y(n: int, rho: float, k: int, t):
    """Konhauser polynomial ``Y_n^(rho)(t; k)`` of degree ``n`` in ``t``."""
    coefs = konhauser_y_coefficients(n, rho, k)
    return _poly1d(coefs, list(range(n + 1)), t)


# --------------------------------------------------------------------------
# bivariate families


@dataclass(frozen=True)
class HK2DParams:
    n: int
    rho: float
    k: int = 1

    def __post_init__(self):
        _check_degree(self.n)
        _check_k(self.k)
        if not self.rho > -1:
            raise ValueError("rho must be > -1")


@dataclass(frozen=True)
class ModHK2DParams:
    n: int
    kappa: float
    rho: float
    c: float
    k: int = 1

    def __post_init__(self):
        _check_degree(self.n)
        _check_k(self.k)
        if not (self.kappa > -1 and self.rho > -1):
            raise ValueError("kappa and rho must be > -1")


def hk2d_table(p: HK2DParams):
    """``(C, ex, ey)`` with ``H = sum C[s, r] (2x)**ex[s] y**ey[r]``."""
    n, k = p.n, p.k
    m = n // 2
    coef = np.zeros((m + 1, n + 1), dtype=LD)
    g = _RecipGamma(p.rho + 1.0, k)
    for s in range(m + 1):
        head = (-1) ** s * _poch(-n, 2 * s) / ld_factorial(s)
        for r in range(n - s + 1):
            coef[s, r] = (
                head * pochhammer_ratio(LD(-n), s + r, LD(-n), s) * g[r] / ld_factorial(r)
            )
    ex = np.array([n - 2 * s for s in range(m + 1)])
    ey = np.array([k * r for r in range(n + 1)])
    return coef, ex, ey


def _require_nonzero(x, method):
    if np.any(_as_array(x) == 0.0):
        raise SingularArgumentError(f"singular argument: method={method!r} needs x != 0")


def hk2d(p: HK2DParams, x, y, method: str = "direct"):
    """2D Hermite-Konhauser polynomial ``kH_n^rho(x, y)``.

    Parameters
    ----------
    p : HK2DParams
    x, y : float or array_like
        Broadcast against each other.
    method : {"direct", "zform", "kdf", "ml"}
        ``direct`` is the double sum in powers of ``2x`` and ``y**k``.
        ``zform`` sums Hermite-type terms against Konhauser ``Z`` polynomials.
        ``kdf`` uses the Kampe de Feriet parameterisation in ``-1/x**2``
        and ``(y/k)**k``; ``ml`` uses the bivariate Mittag-Leffler function at
        ``-1/(4 x**2)``. The last two need ``x != 0``.
    """
    if method == "direct":
        coef, ex, ey = hk2d_table(p)
        return _bivariate(coef, ex, ey, 2.0 * _as_array(x), y)
    if method == "zform":
        return _hk2d_zform(p, x, y)
    if method == "kdf":
        _require_nonzero(x, method)
        return _hk2d_kdf(p, x, y)
    if method == "ml":
        _require_nonzero(x, method)
        return _hk2d_ml(p, x, y)
    raise ValueError(f"unknown method {method!r}")


def _hk2d_zform(p, x, y):
    # Z_{n-s} expanded into its own coefficients, so the outer sum is one table
    n, k = p.n, p.k
    m = n // 2
    g = _RecipGamma(p.rho + 1.0, k)
    coef = np.zeros((m + 1, n + 1), dtype=LD)
    for s in range(m + 1):
        head = (-1) ** s * _poch(-n, 2 * s) * ld_factorial(n - s) * g[n - s] / ld_factorial(s)
        zc = konhauser_z_coefficients(n - s, p.rho, k)
        coef[s, : n - s + 1] = [head * c for c in zc]
    ex = np.array([n - 2 * s for s in range(m + 1)])
    return _bivariate(coef, ex, k * np.arange(n + 1), 2.0 * _as_array(x), y)


def _hk2d_kdf(p, x, y):
    n, k = p.n, p.k
    params = KdFParams(
        upper_joint=(-float(n),),
        upper_x=(-n / 2.0, (-n + 1.0) / 2.0),
        lower_x=(-float(n),),
        lower_y=tuple((p.rho + 1.0 + j) / k for j in range(k)),
    )
    series = BivariateML(kdf_model(params), k=1)
    x, y = np.broadcast_arrays(_as_array(x), _as_array(y))
    vals = series.evaluate(-1.0 / x ** 2, (y / k) ** k)
    out = (2.0 * x) ** n * gamma_recip(1.0 + p.rho) * vals
    return out if out.ndim else float(out)


def _hk2d_ml(p, x, y):
    n = float(p.n)
    mp = MLParams3(-n, -n, -n, p.rho + 1.0, p.k)
    series = BivariateML(hk3_model(mp.g1, mp.g2, mp.g3), k=mp.k, rho=mp.rho)
    x, y = np.broadcast_arrays(_as_array(x), _as_array(y))
    out = (2.0 * x) ** p.n * series.evaluate(-1.0 / (4.0 * x ** 2), y)
    return out if out.ndim else float(out)


def hk2d_partner(m: int, rho: float, k: int, x, y):
    """Biorthogonal partner ``Q_m(x, y) = H_m(x) * sum_{j<=m} Y_j^(rho)(y; k)``."""
    m = _check_degree(m)
    coefs = np.zeros(m + 1, dtype=LD)
    for j in range(m + 1):
        coefs[: j + 1] += konhauser_y_coefficients(j, rho, k)
    return hermite(m, x) * _poly1d(coefs, list(range(m + 1)), y)


def _modified_pole(n: int, c: float) -> bool:
    # (c)_s = 0 once s >= 1 - c; the s-sum runs to n // 2
    return c <= 0 and c == math.floor(c) and 1 - c <= n // 2


def hk2d_modified_table(p: ModHK2DParams):
    n, k = p.n, p.k
    if _modified_pole(n, p.c):
        raise ParameterPoleError(
            f"parameter pole: (c)_s vanishes at s={int(1 - p.c)} <= n//2={n // 2} for c={p.c}"
        )
    coef, ex, ey = hk2d_table(HK2DParams(n, p.rho, k))
    gk = _RecipGamma(p.kappa + 1.0, 1)
    for s in range(n // 2 + 1):
        coef[s, :] *= gk[s] / _poch(p.c, s)
    return coef, ex, ey


def hk2d_modified(p: ModHK2DParams, x, y):
    """Modified 2D Hermite-Konhauser polynomial ``kH_n^{kappa,rho;c}(x, y)``.

    Raises
    ------
    ParameterPoleError
        If ``c`` is a non-positive integer whose Pochhammer symbol vanishes
        inside the finite ``s`` range.
    """
    coef, ex, ey = hk2d_modified_table(p)
    return _bivariate(coef, ex, ey, 2.0 * _as_array(x), y)


def hk2d_modified_ml(p: ModHK2DParams, x, y):
    """Same polynomial from the four-parameter Mittag-Leffler function at ``-1/(4x**2)``."""
    _require_nonzero(x, "ml")
    if _modified_pole(p.n, p.c):
        raise ParameterPoleError(f"parameter pole for c={p.c}, n={p.n}")
    n = float(p.n)
    mp = MLParams4(-n, -n, -n, p.c, p.kappa + 1.0, p.rho + 1.0, p.k)
    series = BivariateML(hk4_model(mp.g1, mp.g2, mp.g3, mp.g4), k=mp.k, kappa=mp.kappa,
                         rho=mp.rho)
    x, y = np.broadcast_arrays(_as_array(x), _as_array(y))
    out = (2.0 * x) ** p.n * series.evaluate(-1.0 / (4.0 * x ** 2), y)
    return out if out.ndim else float(out)


def jk2d_table(n: int, alpha: float, rho: float, k: int):
    """``(C, ex, ey)`` with ``P = sum C[s, r] ((1-x)/2)**ex[s] y**ey[r]``."""
    n = _check_degree(n)
    k = _check_k(k)
    if not (alpha > -1 and rho > -1):
        raise ValueError("alpha and rho must be > -1")
    coef = np.zeros((n + 1, n + 1), dtype=LD)
    b = LD(alpha) + LD(rho) + (n + 1)
    g = _RecipGamma(rho + 1.0, k)
    for s in range(n + 1):
        # Gamma(1+alpha+n) / Gamma(1+alpha+s) = (1+alpha+s)_{n-s}
        head = _poch(b, s) * _poch(LD(alpha) + 1 + s, n - s) / (ld_factorial(n) * ld_factorial(s))
        for r in range(n - s + 1):
            coef[s, r] = head * _poch(-n, s + r) * g[r] / ld_factorial(r)
    return coef, np.arange(n + 1), k * np.arange(n + 1)


def jk2d(n: int, alpha: float, rho: float, k: int, x, y):
    """2D Jacobi-Konhauser polynomial ``kP_n^(alpha, rho)(x, y)``."""
    coef, ex, ey = jk2d_table(n, alpha, rho, k)
    return _bivariate(coef, ex, ey, (1.0 - _as_array(x)) / 2.0, y)


def jk2d_ml(n: int, alpha: float, rho: float, k: int, x, y):
    """Same polynomial through the two-parameter J-K Mittag-Leffler function."""
    series = BivariateML(jk2_model(-float(n), 1.0 + alpha + rho + n), k=k, kappa=alpha + 1.0,
                         rho=rho + 1.0)
    x, y = np.broadcast_arrays(_as_array(x), _as_array(y))
    pre = math.exp(math.lgamma(1.0 + alpha + n)) / math.factorial(n)
    out = pre * series.evaluate((1.0 - x) / 2.0, y)
    return out if out.ndim else float(out)
