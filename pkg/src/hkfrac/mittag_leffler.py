"""Prabhakar function, the bivariate H-K Mittag-Leffler family and Kampe de Feriet series.

All double series here share one coefficient model, :class:`DoubleHypergeometric`::

    c(s, r) = scale**s * S[s] * R[r] * J[s + r] * prod_a (a + s)_r / (s! r!)

where ``S``, ``R`` and ``J`` are ratios of Pochhammer products in ``s``,
``r`` and ``s + r``. Equal upper/lower parameters are cancelled before any
product is formed, so ``(-n)_{s+r} / (-n)_s`` becomes ``(-n+s)_r`` and
duplication ``(g)_{2s} = 4**s (g/2)_s ((g+1)/2)_s`` lets ``(g1+1)/2`` in a
denominator cancel exactly. That cancellation is the analytic continuation
the kernel identities rely on.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .core import (
    DEFAULT_CONTROL,
    NonterminatingPoleError,
    SeriesControl,
    SeriesResult,
    gamma_recip,
    power,
    sum_double_series,
    sum_series,
)

_EQ_TOL = 1e-14
LD = np.longdouble


@lru_cache(maxsize=None)
def ld_factorial(n: int):
    """``n!`` as a long double (exact up to ``25!``)."""
    return LD(1) if n < 2 else ld_factorial(n - 1) * n


def _same(a: float, b: float) -> bool:
    return a == b or abs(a - b) <= _EQ_TOL * max(1.0, abs(a), abs(b))


def _remove_common(upper: List[float], lower: List[float]):
    upper = list(upper)
    lower = list(lower)
    for b in list(lower):
        for i, a in enumerate(upper):
            if _same(a, b):
                del upper[i]
                lower.remove(b)
                break
    return upper, lower


def _nonpos_int(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


class _RatioTable:
    """Lazily extended ``T[n] = prod (a)_n / prod (b)_n`` with termination logic.

    Once a numerator factor vanishes every later entry is exactly zero; a
    vanishing denominator factor with a non-zero running product is a pole.
    """

    def __init__(self, upper: Sequence[float], lower: Sequence[float]):
        self.upper = tuple(upper)
        self.lower = tuple(lower)
        self._up = tuple(LD(a) for a in upper)
        self._lo = tuple(LD(b) for b in lower)
        self.values = [LD(1)]
        self.stop = None  # first index whose entry is zero
        self._pole_at = None
        ends = [int(-a) + 1 for a in self.upper if _nonpos_int(a)]
        self.bound = min(ends) - 1 if ends else None  # last possibly non-zero index
        poles = [int(-b) + 1 for b in self.lower if _nonpos_int(b)]
        first_pole = min(poles) if poles else None
        if first_pole is not None and (self.bound is None or first_pole <= self.bound):
            self._pole_at = first_pole

    def check_pole(self, limit: Optional[int] = None):
        if self._pole_at is not None and (limit is None or self._pole_at <= limit):
            raise NonterminatingPoleError(
                f"nonterminating pole: lower parameter vanishes at index {self._pole_at} "
                f"before the series terminates (upper={self.upper}, lower={self.lower})"
            )

    def __getitem__(self, n: int) -> float:
        vals = self.values
        while len(vals) <= n:
            k = len(vals) - 1
            prev = vals[-1]
            if prev == 0:
                vals.append(LD(0))
                continue
            num = LD(1)
            for a in self._up:
                num *= a + k
            den = LD(1)
            for b in self._lo:
                den *= b + k
            if num == 0:
                vals.append(LD(0))
            elif den == 0.0:
                raise NonterminatingPoleError(
                    f"nonterminating pole at index {k + 1}: upper={self.upper}, lower={self.lower}"
                )
            else:
                vals.append(prev * num / den)
        return vals[n]


@dataclass
class DoubleHypergeometric:
    """Coefficient model ``c(s, r)`` described in the module docstring.

    ``s_upper`` etc. hold Pochhammer parameters attached to ``s``, ``r`` and
    ``s + r``; ``shift`` holds parameters ``a`` contributing ``(a + s)_r``.
    Cancellation between the lists happens in :meth:`simplified`.
    """

    s_upper: Tuple[float, ...] = ()
    s_lower: Tuple[float, ...] = ()
    r_upper: Tuple[float, ...] = ()
    r_lower: Tuple[float, ...] = ()
    j_upper: Tuple[float, ...] = ()
    j_lower: Tuple[float, ...] = ()
    shift: Tuple[float, ...] = ()
    scale: float = 1.0
    _tables: Dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def simplified(cls, s_upper=(), s_lower=(), r_upper=(), r_lower=(), j_upper=(),
                   j_lower=(), scale=1.0) -> "DoubleHypergeometric":
        su, sl = _remove_common(s_upper, s_lower)
        ru, rl = _remove_common(r_upper, r_lower)
        ju, jl = _remove_common(j_upper, j_lower)
        shift = []
        # (a)_{s+r} / (a)_s = (a+s)_r
        for a in list(ju):
            for b in sl:
                if _same(a, b):
                    sl.remove(b)
                    ju.remove(a)
                    shift.append(a)
                    break
        obj = cls(tuple(su), tuple(sl), tuple(ru), tuple(rl), tuple(ju), tuple(jl),
                  tuple(shift), float(scale))
        return obj

    def _table(self, key):
        if key not in self._tables:
            up, lo = {"s": (self.s_upper, self.s_lower), "r": (self.r_upper, self.r_lower),
                      "j": (self.j_upper, self.j_lower)}[key]
            self._tables[key] = _RatioTable(up, lo)
        return self._tables[key]

    def support(self, s_cap: Optional[int] = None,
                r_cap: Optional[int] = None) -> Tuple[Optional[int], Optional[int], Optional[int]]:
        """``(max_s, max_r, max_d)`` beyond which every coefficient is zero.

        ``s_cap``/``r_cap`` restrict the indices that will be used (``x = 0``
        keeps only ``s = 0``); poles outside that range are not an error.

        Raises
        ------
        NonterminatingPoleError
            If a denominator vanishes at an index the series still reaches.
        """
        ts, tr, tj = self._table("s"), self._table("r"), self._table("j")
        max_s, max_r, max_d = ts.bound, tr.bound, tj.bound
        if s_cap is not None:
            max_s = s_cap if max_s is None else min(max_s, s_cap)
        if r_cap is not None:
            max_r = r_cap if max_r is None else min(max_r, r_cap)
        for a in self.shift:
            if _nonpos_int(a) and max_s is not None and max_s <= -a:
                # (a+s)_r vanishes for s + r > -a only while s <= -a; beyond
                # that it never does, so the bound needs s to stop first
                bound = int(-a)
                max_d = bound if max_d is None else min(max_d, bound)
        ts.check_pole(max_s if max_s is not None else max_d)
        tr.check_pole(max_r if max_r is not None else max_d)
        tj.check_pole(max_d)
        return max_s, max_r, max_d

    def coefficient(self, s: int, r: int):
        """``c(s, r)`` including ``1/(s! r!)`` and ``scale**s``, as a long double."""
        sv = self._table("s")[s]
        if sv == 0:
            return LD(0)
        rv = self._table("r")[r]
        if rv == 0:
            return LD(0)
        jv = self._table("j")[s + r]
        if jv == 0:
            return LD(0)
        sh = LD(1)
        for a in self.shift:
            base = LD(a) + s
            for i in range(r):
                sh *= base + i
            if sh == 0:
                return LD(0)
        return LD(self.scale) ** s * sv * rv * jv * sh / (ld_factorial(s) * ld_factorial(r))

    def abs_version(self) -> "DoubleHypergeometric":
        """Model whose coefficients bound ``|c(s, r)|`` (used for L1 bound constants)."""
        return _AbsHypergeometric(self)


class _AbsHypergeometric(DoubleHypergeometric):
    def __init__(self, inner: DoubleHypergeometric):
        super().__init__(inner.s_upper, inner.s_lower, inner.r_upper, inner.r_lower,
                         inner.j_upper, inner.j_lower, inner.shift, abs(inner.scale))
        self._inner = inner

    def coefficient(self, s, r):
        return abs(self._inner.coefficient(s, r))


# --------------------------------------------------------------------------
# parameter bundles

@dataclass(frozen=True)
class MLParams3:
    g1: float
    g2: float
    g3: float
    rho: float
    k: int

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be > 0")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")


@dataclass(frozen=True)
class MLParams4:
    g1: float
    g2: float
    g3: float
    g4: float
    kappa: float
    rho: float
    k: int

    def __post_init__(self):
        if not (self.kappa > 0 and self.rho > 0):
            raise ValueError("kappa and rho must be > 0")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")


@dataclass(frozen=True)
class KdFParams:
    upper_joint: Tuple[float, ...] = ()
    upper_x: Tuple[float, ...] = ()
    upper_y: Tuple[float, ...] = ()
    lower_joint: Tuple[float, ...] = ()
    lower_x: Tuple[float, ...] = ()
    lower_y: Tuple[float, ...] = ()


def hk3_model(g1: float, g2: float, g3: float) -> DoubleHypergeometric:
    """Coefficients of ``(g1)_{2s} (g2)_{s+r} / ((g3)_s s! r!)``."""
    return DoubleHypergeometric.simplified(
        s_upper=(g1 / 2.0, (g1 + 1.0) / 2.0), s_lower=(g3,), j_upper=(g2,), scale=4.0
    )


def hk4_model(g1: float, g2: float, g3: float, g4: float) -> DoubleHypergeometric:
    """Coefficients of ``(g1)_{2s} (g2)_{s+r} / ((g3)_s (g4)_s s! r!)``."""
    return DoubleHypergeometric.simplified(
        s_upper=(g1 / 2.0, (g1 + 1.0) / 2.0), s_lower=(g3, g4), j_upper=(g2,), scale=4.0
    )


def jk2_model(g1: float, g2: float) -> DoubleHypergeometric:
    """Coefficients of ``(g1)_{r+s} (g2)_s / (s! r!)``."""
    return DoubleHypergeometric.simplified(s_upper=(g2,), j_upper=(g1,))


def cemo_model(g: float) -> DoubleHypergeometric:
    """Coefficients of ``(g)_{r+s} / (r! s!)``."""
    return DoubleHypergeometric.simplified(j_upper=(g,))


def kdf_model(p: KdFParams) -> DoubleHypergeometric:
    return DoubleHypergeometric.simplified(
        s_upper=p.upper_x, s_lower=p.lower_x, r_upper=p.upper_y, r_lower=p.lower_y,
        j_upper=p.upper_joint, j_lower=p.lower_joint,
    )


# --------------------------------------------------------------------------
# evaluation


class _RecipGamma:
    """``1/Gamma(base + step*i)`` for ``i = 0, 1, ...`` in long double.

    For ``base > 0`` the values come from ``1/Gamma(base)`` divided by a
    rising product, so every entry shares the rounding of one float64 gamma
    call and relative accuracy between entries is long-double level.
    """

    def __init__(self, base: Optional[float], step: int):
        self.base = base
        self.step = step
        if base is None:
            self.values = None
        elif base > 0:
            self.values = [LD(gamma_recip(base))]
            self._next = LD(base)
        else:
            self.values = []

    def __getitem__(self, i: int):
        if self.values is None:
            return LD(1)
        vals = self.values
        if self.base > 0:
            while len(vals) <= i:
                v = vals[-1]
                for _ in range(self.step):
                    v = v / self._next
                    self._next += 1
                vals.append(v)
            return vals[i]
        while len(vals) <= i:
            vals.append(LD(gamma_recip(self.base + self.step * len(vals))))
        return vals[i]


class BivariateML:
    """``sum c(s,r) x**s y**(k r) * G_x(s) * G_y(r)`` with optional inverse-gamma
    factors ``G_x(s) = 1/Gamma(kappa + s)`` and ``G_y(r) = 1/Gamma(rho + k r)``."""

    def __init__(self, model: DoubleHypergeometric, k: int = 1,
                 kappa: Optional[float] = None, rho: Optional[float] = None):
        self.model = model
        self.k = int(k)
        self.kappa = kappa
        self.rho = rho
        self._gx = _RecipGamma(kappa, 1)
        self._gy = _RecipGamma(rho, self.k)

    def gx(self, s: int):
        return self._gx[s]

    def gy(self, r: int):
        return self._gy[r]

    def weight(self, s: int, r: int):
        """Coefficient of ``x**s y**(k r)`` (long double)."""
        c = self.model.coefficient(s, r)
        if c == 0:
            return LD(0)
        return c * self.gx(s) * self.gy(r)

    def __call__(self, x: float, y: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
        xl = LD(x)
        yk = LD(y) ** self.k

        def term(s, r):
            w = self.weight(s, r)
            if w == 0:
                return w
            return w * power(xl, s) * power(yk, r)

        support = self.model.support(0 if x == 0.0 else None, 0 if y == 0.0 else None)
        return sum_double_series(term, ctrl, support)

    def table(self, max_s: int, max_r: int) -> np.ndarray:
        """Dense ``weight(s, r)`` table for ``s <= max_s``, ``r <= max_r``."""
        out = np.zeros((max_s + 1, max_r + 1), dtype=LD)
        for s in range(max_s + 1):
            for r in range(max_r + 1):
                out[s, r] = self.weight(s, r)
        return out

    def truncation(self, x_max: float, y_max: float,
                   ctrl: SeriesControl = DEFAULT_CONTROL) -> Tuple[int, int]:
        """Index box that holds the series to ``ctrl.rel_tol`` for all
        ``|x| <= x_max``, ``|y| <= y_max`` (magnitudes dominate termwise)."""
        support = self.model.support()
        if support[2] is not None or (support[0] is not None and support[1] is not None):
            ms = support[0] if support[0] is not None else support[2]
            mr = support[1] if support[1] is not None else support[2]
            return ms, mr
        yk = power(abs(y_max), self.k)
        xm = abs(x_max)
        seen = {"s": 0, "r": 0}

        def term(s, r):
            w = self.weight(s, r)
            if w == 0:
                return 0.0
            v = float(abs(w)) * power(xm, s) * power(yk, r)
            if v > 0:
                seen["s"] = max(seen["s"], s)
                seen["r"] = max(seen["r"], r)
            return v

        sum_double_series(term, ctrl, support)
        return seen["s"], seen["r"]

    def evaluate(self, x, y, ctrl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
        """Vectorised evaluation on broadcast arrays via the compiled kernel."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        if x.size == 0:
            return np.zeros(x.shape)
        ms, mr = self.truncation(float(np.max(np.abs(x))), float(np.max(np.abs(y))), ctrl)
        coef = self.table(ms, mr)
        ex = np.arange(ms + 1)
        ey = self.k * np.arange(mr + 1)
        vals = kernels.double_power_sum(coef, ex, ey, x.ravel(), y.ravel())
        return vals.reshape(x.shape)

    def grid(self, xs, ys, ctrl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        ms, mr = self.truncation(float(np.max(np.abs(xs))), float(np.max(np.abs(ys))), ctrl)
        coef = self.table(ms, mr)
        return kernels.double_power_grid(coef, np.arange(ms + 1), self.k * np.arange(mr + 1), xs, ys)


def ml_prabhakar(alpha: float, beta: float, gamma: float, z: float,
                 ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Three-parameter Mittag-Leffler function ``sum (gamma)_n z^n / (Gamma(alpha n + beta) n!)``."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be > 0")
    table = _RatioTable((gamma,), ())
    stop = table.bound

    def term(n):
        c = table[n]
        if c == 0:
            return 0.0
        return float(c * power(LD(z), n) * LD(gamma_recip(alpha * n + beta)) / ld_factorial(n))

    if z == 0.0:
        stop = 0
    return sum_series(term, ctrl, max_index=stop)


def ml_hk3(p: MLParams3, x: float, y: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Bivariate H-K Mittag-Leffler function ``E^{(g1;g2;g3)}_{rho,k}(x, y)``."""
    return BivariateML(hk3_model(p.g1, p.g2, p.g3), k=p.k, rho=p.rho)(x, y, ctrl)


def ml_hk4(p: MLParams4, x: float, y: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Modified function ``E^{(g1;g2;g3;g4)}_{kappa,rho,k}(x, y)``."""
    return BivariateML(hk4_model(p.g1, p.g2, p.g3, p.g4), k=p.k, kappa=p.kappa, rho=p.rho)(
        x, y, ctrl
    )


def ml_jk2(g1: float, g2: float, kappa: float, rho: float, k: int, x: float, y: float,
           ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Bivariate J-K Mittag-Leffler function ``E^{(g1;g2)}_{kappa,rho,k}(x, y)``."""
    if not (kappa > 0 and rho > 0):
        raise ValueError("kappa and rho must be > 0")
    return BivariateML(jk2_model(g1, g2), k=k, kappa=kappa, rho=rho)(x, y, ctrl)


def ml_cemo(g: float, kappa: float, rho: float, k: int, x: float, y: float,
            ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """``E^{(g)}_{kappa,rho,k}(x, y) = sum (g)_{r+s} x^s y^{k r} / (s! r! Gamma(kappa+s) Gamma(rho+k r))``."""
    return BivariateML(cemo_model(g), k=k, kappa=kappa, rho=rho)(x, y, ctrl)


def kdf_series(p: KdFParams, x: float, y: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Kampe de Feriet double series; ``upper_x``/``lower_x`` attach to the power of ``x``."""
    return BivariateML(kdf_model(p), k=1)(x, y, ctrl)
