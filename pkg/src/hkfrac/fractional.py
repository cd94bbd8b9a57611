"""Riemann-Liouville operators on generalized power series, numerical oracles
and Laplace transforms.

A :class:`GPSeries` ``sum c_i (t - b)**(beta_i - 1)`` is closed under the RL
integral and derivative, which act termwise through Beta integrals. The
quadrature routines here are the independent check on those exact maps.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from .core import DEFAULT_CONTROL, SeriesControl, gamma_recip, pochhammer, sum_double_series, sum_series
from .mittag_leffler import LD, BivariateML, MLParams3, hk3_model, hk4_model
from .quadrature import build_rule

class NonIntegrableError(ValueError):
    """A termwise derivative produced an exponent ``beta <= 0`` with a non-zero coefficient."""


def _merge_key(e: float) -> float:
    # exponents produced along different routes differ by a few ulps
    return float(f"{e:.11g}")


def _merge(items):
    """Sort ``(coeff, *exponents)`` tuples by exponents, merging near-equal keys."""
    groups = {}
    for c, *ex in items:
        key = tuple(_merge_key(e) for e in ex)
        if key not in groups:
            groups[key] = (tuple(ex), [])
        groups[key][1].append(c)
    out = []
    for key in sorted(groups):
        ex, cs = groups[key]
        total = math.fsum(cs)
        if total != 0.0:
            out.append((total,) + ex)
    return tuple(out)


def _log_gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)`` for positive ``a`` and any real ``b``."""
    rb = gamma_recip(b)
    if rb == 0.0:
        return 0.0
    if a < 170.0 and abs(rb) > 1e-300:
        return math.gamma(a) * rb
    if b > 0:
        return math.exp(math.lgamma(a) - math.lgamma(b))
    return math.copysign(math.exp(math.lgamma(a) + math.log(abs(rb))), rb)


@dataclass(frozen=True)
class GPSeries:
    """``sum coeff * (t - base)**(beta - 1)`` over ``terms = ((coeff, beta), ...)``."""

    base: float
    terms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        merged = _merge((float(c), float(b)) for c, b in self.terms)
        for _, beta in merged:
            if not beta > 0:
                raise ValueError(f"GPSeries exponents must be > 0, got {beta!r}")
        object.__setattr__(self, "terms", merged)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = t - self.base
        out = np.zeros(np.shape(t))
        for c, beta in self.terms:
            out = out + c * u ** (beta - 1.0)
        return out if out.ndim else float(out)

    def __add__(self, other: "GPSeries") -> "GPSeries":
        if other.base != self.base:
            raise ValueError("series with different base points cannot be added")
        return GPSeries(self.base, self.terms + other.terms)

    def scale(self, a: float) -> "GPSeries":
        return GPSeries(self.base, tuple((a * c, b) for c, b in self.terms))

    def __sub__(self, other: "GPSeries") -> "GPSeries":
        return self + other.scale(-1.0)

    @property
    def exponents(self):
        return tuple(b for _, b in self.terms)


@dataclass(frozen=True)
class GPSeries2D:
    """``sum coeff * (x - a)**(bx - 1) * (y - c)**(by - 1)``."""

    base: Tuple[float, float]
    terms: Tuple[Tuple[float, float, float], ...] = ()

    def __post_init__(self):
        merged = _merge((float(c), float(bx), float(by)) for c, bx, by in self.terms)
        for _, bx, by in merged:
            if not (bx > 0 and by > 0):
                raise ValueError(f"GPSeries2D exponents must be > 0, got {(bx, by)!r}")
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))
        object.__setattr__(self, "terms", merged)

    @classmethod
    def product(cls, fx: GPSeries, fy: GPSeries) -> "GPSeries2D":
        return cls((fx.base, fy.base), tuple((cx * cy, bx, by) for cx, bx in fx.terms
                                             for cy, by in fy.terms))

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        u = x - self.base[0]
        v = y - self.base[1]
        out = np.zeros(x.shape)
        for c, bx, by in self.terms:
            out = out + c * u ** (bx - 1.0) * v ** (by - 1.0)
        return out if out.ndim else float(out)

    def __add__(self, other: "GPSeries2D") -> "GPSeries2D":
        if other.base != self.base:
            raise ValueError("series with different base points cannot be added")
        return GPSeries2D(self.base, self.terms + other.terms)

    def scale(self, a: float) -> "GPSeries2D":
        return GPSeries2D(self.base, tuple((a * c, bx, by) for c, bx, by in self.terms))

    def __sub__(self, other: "GPSeries2D") -> "GPSeries2D":
        return self + other.scale(-1.0)

    def lowest_exponents(self) -> Tuple[float, float]:
        if not self.terms:
            return 1.0, 1.0
        return min(t[1] for t in self.terms), min(t[2] for t in self.terms)


def coefficient_deviation(a, b) -> float:
    """Largest ``|c_a - c_b|`` over matched exponents, relative to ``max |c|``.

    Works for both :class:`GPSeries` and :class:`GPSeries2D`.
    """
    both = tuple((c,) + tuple(k) for c, *k in a.terms) + tuple((-c,) + tuple(k) for c, *k in b.terms)
    diff = _merge(both)
    scale = max([abs(t[0]) for t in a.terms + b.terms] + [1e-300])
    return max([abs(t[0]) for t in diff] + [0.0]) / scale


# --------------------------------------------------------------------------
# exact termwise operators


def rl_integral_series(F: GPSeries, mu: float) -> GPSeries:
    """Termwise RL integral ``(c, beta) -> (c Gamma(beta)/Gamma(beta+mu), beta+mu)``."""
    if not mu > 0:
        raise ValueError("integral order must be > 0")
    return GPSeries(F.base, tuple((c * _log_gamma_ratio(b, b + mu), b + mu) for c, b in F.terms))


def rl_derivative_terms(F: GPSeries, mu: float):
    """Formal termwise image ``(c Gamma(beta)/Gamma(beta-mu), beta-mu)``; pole terms dropped.

    Exponents may be ``<= 0``; the result is a pointwise formula, not a GPSeries.
    """
    if mu < 0:
        raise ValueError("derivative order must be >= 0")
    out = []
    for c, b in F.terms:
        ratio = _log_gamma_ratio(b, b - mu)
        if ratio != 0.0:
            out.append((c * ratio, b - mu))
    return tuple(out)


def rl_derivative_series(F: GPSeries, mu: float) -> GPSeries:
    """Termwise RL derivative of order ``mu >= 0``.

    Raises
    ------
    NonIntegrableError
        If a surviving term has exponent ``beta - mu <= 0``.
    """
    terms = rl_derivative_terms(F, mu)
    bad = [b for c, b in terms if not b > 0]
    if bad:
        raise NonIntegrableError(
            f"non-integrable result: derivative of order {mu} leaves exponents {bad}"
        )
    return GPSeries(F.base, terms)


def eval_terms(terms, base: float, t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    for c, b in terms:
        out = out + c * (t - base) ** (b - 1.0)
    return out if out.ndim else float(out)


def rl_integral_2d(F: GPSeries2D, mu_x: float, mu_y: float) -> GPSeries2D:
    """Double RL integral (orders ``mu_x`` in ``x`` and ``mu_y`` in ``y``)."""
    if not (mu_x > 0 and mu_y > 0):
        raise ValueError("integral orders must be > 0")
    return GPSeries2D(F.base, tuple(
        (c * _log_gamma_ratio(bx, bx + mu_x) * _log_gamma_ratio(by, by + mu_y), bx + mu_x, by + mu_y)
        for c, bx, by in F.terms
    ))


def rl_derivative_2d(F: GPSeries2D, mu_x: float, mu_y: float) -> GPSeries2D:
    """Partial RL derivatives of orders ``mu_x`` and ``mu_y``; see :func:`rl_derivative_series`."""
    if mu_x < 0 or mu_y < 0:
        raise ValueError("derivative orders must be >= 0")
    out = []
    for c, bx, by in F.terms:
        r = _log_gamma_ratio(bx, bx - mu_x) * _log_gamma_ratio(by, by - mu_y)
        if r == 0.0:
            continue
        if not (bx - mu_x > 0 and by - mu_y > 0):
            raise NonIntegrableError(
                f"non-integrable result: exponents {(bx - mu_x, by - mu_y)} after differentiation"
            )
        out.append((c * r, bx - mu_x, by - mu_y))
    return GPSeries2D(F.base, tuple(out))


# --------------------------------------------------------------------------
# numerical oracles


@lru_cache(maxsize=256)
def _jacobi_rule(N: int, a: float, b: float):
    return build_rule("jacobi", N, a, b)


def rl_integral_numeric(f: Callable, mu: float, a: float, x: float, N: int = 32,
                        lower_exponent: float = 0.0) -> float:
    """Gauss-Jacobi value of ``1/Gamma(mu) int_a^x (x-t)**(mu-1) (t-a)**p f(t) dt``.

    ``p = lower_exponent`` moves an endpoint singularity of the integrand at
    ``t = a`` into the weight; ``f`` should then be smooth.
    """
    if not mu > 0:
        raise ValueError("integral order must be > 0")
    if not x > a:
        return 0.0
    rule = _jacobi_rule(N, mu - 1.0, lower_exponent)
    h = (x - a) / 2.0
    t = a + h * (1.0 + rule.nodes)
    vals = np.asarray(f(t), dtype=float)
    return h ** (mu + lower_exponent) * gamma_recip(mu) * float(np.dot(rule.weights, vals))


def _central_derivative(F: Callable[[float], float], x: float, order: int, h: float) -> float:
    acc = 0.0
    for j in range(order + 1):
        acc += (-1) ** j * math.comb(order, j) * F(x + (order / 2.0 - j) * h)
    return acc / h ** order


def rl_derivative_numeric(f: Callable, mu: float, a: float, x: float, N: int = 40,
                          lower_exponent: float = 0.0, levels: int = 4) -> float:
    """``(d/dx)**n I^{n-mu} f`` with ``n = floor(mu) + 1``.

    The inner integral is :func:`rl_integral_numeric`; the outer derivative is
    a central difference refined by Richardson extrapolation in ``h**2``.
    """
    if mu < 0:
        raise ValueError("derivative order must be >= 0")
    n = int(math.floor(mu)) + 1

    def inner(xi):
        return rl_integral_numeric(f, n - mu, a, xi, N, lower_exponent)

    h0 = (x - a) / (2.0 * n + 2.0)
    table = [_central_derivative(inner, x, n, h0 / 2 ** i) for i in range(levels)]
    for m in range(1, levels):
        factor = 4.0 ** m
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return table[0]


# --------------------------------------------------------------------------
# Laplace transforms


def laplace_series(F: GPSeries, q: float) -> float:
    """Termwise Laplace transform ``sum c Gamma(beta) / q**beta`` of a series based at 0."""
    if F.base != 0.0:
        raise ValueError("laplace_series requires base 0")
    if not q > 0:
        raise ValueError("q must be > 0")
    return math.fsum(c * math.exp(math.lgamma(b) - b * math.log(q)) for c, b in F.terms)


def laplace_numeric(f: Callable, q: float, alpha: float = 0.0, N: int = 60) -> float:
    """Gauss-Laguerre value of ``int_0^inf exp(-q t) t**alpha f(t) dt``."""
    rule = build_rule("laguerre", N, alpha)
    return q ** (-(alpha + 1.0)) * rule.integrate(np.asarray(f(rule.nodes / q), dtype=float))


def ml_gpseries_y(p: MLParams3, x: float, w: float, base: float = 0.0,
                  extent: Optional[float] = None, ctrl: SeriesControl = DEFAULT_CONTROL) -> GPSeries:
    """``(Y-B)**(rho-1) E^{(g1;g2;g3)}_{rho,k}(x, w (Y-B))`` as a series in ``Y``.

    A terminating parameter set gives the exact finite series. Otherwise the
    series is cut where it reaches ``ctrl.rel_tol`` for ``|Y - B| <= extent``.
    """
    series = BivariateML(hk3_model(p.g1, p.g2, p.g3), k=p.k, rho=p.rho)
    if extent is None:
        ms, mr = _finite_box(series)
    else:
        ms, mr = series.truncation(abs(x), abs(w) * float(extent), ctrl)
    terms = []
    for r in range(mr + 1):
        # 1/Gamma(rho + k r) stays inside; it is what an RL map acts on
        c = float(sum((series.weight(s, r) * LD(x) ** s for s in range(ms + 1)), LD(0)))
        if c != 0.0:
            terms.append((c * w ** (p.k * r), p.rho + p.k * r))
    return GPSeries(base, tuple(terms))


def _finite_box(series: BivariateML):
    ms, mr, md = series.model.support()
    ms = ms if ms is not None else md
    mr = mr if mr is not None else md
    if ms is None or mr is None:
        raise ValueError("series does not terminate; pass an extent for truncation")
    return ms, mr


def two_f_zero(a: float, b: float, z: float) -> float:
    """Terminating ``2F0[a, b; -; z]``; divergent parameter sets raise."""
    stops = [int(-v) for v in (a, b) if v <= 0 and v == math.floor(v)]
    if not stops and z != 0.0:
        raise ValueError("2F0 does not terminate: one upper parameter must be a non-positive integer")
    m = min(stops) if stops else 0
    return math.fsum(pochhammer(a, s) * pochhammer(b, s) * z ** s / math.factorial(s)
                     for s in range(m + 1))


def laplace_ml_closed_forms(g1: float, g2: float, rho: float, k: int, x: float, w: float,
                            q: float) -> Tuple[float, float]:
    """Closed forms for ``L[Y**(rho-1) E^{(g1;g2;(g1+1)/2)}_{rho,k}(x, wY)](q)``.

    Returns ``(half, shifted)``: the ``2F0`` first parameter is ``g1/2`` in
    ``half`` and ``(g1+1)/2`` in ``shifted``.
    """
    if not abs(w ** k / q ** k) < 1:
        raise ValueError("domain error: need |w^k / q^k| < 1")
    qk = q ** k
    pre = q ** (-rho) * ((qk - w ** k) / qk) ** (-g2)
    z = 4.0 * qk * x / (qk - w ** k)
    return pre * two_f_zero(g1 / 2.0, g2, z), pre * two_f_zero((g1 + 1.0) / 2.0, g2, z)


def laplace_ml_termwise(g1: float, g2: float, rho: float, k: int, x: float, w: float,
                        q: float) -> float:
    series = ml_gpseries_y(MLParams3(g1, g2, (g1 + 1.0) / 2.0, rho, k), x, w)
    return laplace_series(series, q)


def laplace2d_check(g1: float, g2: float, kappa: float, rho: float, k: int, nu1: float,
                    nu2: float, p: float, q: float,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> Tuple[float, float]:
    """Termwise 2D Laplace transform of ``X**(kappa-1) Y**(rho-1) E^{(g1;g2;(g1+1)/2;g2)}(nu1 X, nu2 Y)``
    against its closed form. Returns ``(lhs, rhs)``."""
    if not (p > 0 and q > 0):
        raise ValueError("domain error: need p > 0 and q > 0")
    qk = q ** k
    r2 = nu2 ** k / qk
    # the termwise double sum converges absolutely only for 4|nu1| < p (1 - |r2|)
    r_abs = 4.0 * abs(nu1) / (p * (1.0 - abs(r2))) if abs(r2) < 1 else math.inf
    if not r_abs < 1:
        raise ValueError("domain error: transform parameters outside the convergence region")
    r1 = 4.0 * nu1 * qk / (p * (qk - nu2 ** k))
    series = BivariateML(hk4_model(g1, g2, (g1 + 1.0) / 2.0, g2), k=k, kappa=kappa, rho=rho)

    def term(s, r):
        wgt = series.weight(s, r)
        if wgt == 0:
            return 0.0
        if (nu1 == 0.0 and s) or (nu2 == 0.0 and r):
            return 0.0
        bx = kappa + s
        by = rho + k * r
        # L[X^(bx-1)](p) = Gamma(bx)/p^bx, likewise in Y; summed in logs since
        # Gamma(by) alone overflows long before the term is negligible
        log_mag = float(np.log(abs(wgt))) + math.lgamma(bx) - bx * math.log(p) \
            + math.lgamma(by) - by * math.log(q)
        if s:
            log_mag += s * math.log(abs(nu1))
        if r:
            log_mag += k * r * math.log(abs(nu2))
        sign = np.sign(wgt) * (np.sign(nu1) ** s) * (np.sign(nu2) ** (k * r))
        return float(sign) * math.exp(log_mag)

    lhs = sum_double_series(term, ctrl, series.model.support()).value
    rhs = p ** (-kappa) * q ** (-rho) * ((qk - nu2 ** k) / qk) ** (-g2) * (1.0 - r1) ** (-g1 / 2.0)
    return lhs, rhs
