"""Gamma-function helpers, Pochhammer symbols and the double-series engine.

Every series in the package is summed through :func:`sum_double_series`
(or its one-index sibling :func:`sum_series`), which walks anti-diagonals
``s + r = d`` in increasing ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple


class SeriesError(ArithmeticError):
    """Base class for failures of the series machinery."""


class NoConvergenceError(SeriesError):
    """Caps were reached before the stopping rule was satisfied."""


class NonterminatingPoleError(SeriesError):
    """A denominator Pochhammer symbol vanished before the series terminated."""


class ParameterPoleError(NonterminatingPoleError):
    """A polynomial parameter (such as ``c``) puts a pole inside the finite sum."""


@dataclass(frozen=True)
class SeriesResult:
    value: float
    abs_error_est: float
    terms_used: int
    terminated: bool

    def __post_init__(self):
        if self.abs_error_est < 0:
            raise ValueError("abs_error_est must be non-negative")
        if self.terminated and self.abs_error_est != 0:
            raise ValueError("terminated series carry no truncation error")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-15
    max_index_s: int = 500
    max_index_r: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_index_s < 1 or self.max_index_r < 1:
            raise ValueError("series caps must be at least 1")


DEFAULT_CONTROL = SeriesControl()


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_recip(x: float) -> float:
    """Reciprocal gamma function, entire on the real line.

    Returns exactly ``0.0`` at the poles ``0, -1, -2, ...``.
    """
    if _is_nonpositive_integer(x):
        return 0.0
    if x > 0:
        if x < 170.0:
            return 1.0 / math.gamma(x)
        return math.exp(-math.lgamma(x))
    # reflection: 1/G(x) = G(1-x) sin(pi x) / pi, with sin reduced mod 2
    frac = math.fmod(x, 2.0)
    sin_term = math.sin(math.pi * frac)
    one_minus = 1.0 - x
    if one_minus < 170.0:
        return math.gamma(one_minus) * sin_term / math.pi
    return math.exp(math.lgamma(one_minus)) * sin_term / math.pi


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)`` for ``a > 0`` and ``b > 0`` without overflow."""
    return math.exp(math.lgamma(a) - math.lgamma(b))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n`` as an explicit product."""
    if n < 0:
        raise ValueError("Pochhammer index must be non-negative")
    out = 1.0
    for i in range(n):
        out *= a + i
        if out == 0.0:
            return 0.0
    return out


def pochhammer_ratio(a: float, p: int, b: float, q: int) -> float:
    """``(a)_p / (b)_q``, cancelling shared factors when ``a == b``.

    With ``a == b`` and ``p >= q`` the value is the product
    ``(a+q)(a+q+1)...(a+p-1)``, so vanishing common factors never produce 0/0.
    """
    if a == b:
        if p >= q:
            return pochhammer(a + q, p - q)
        den = pochhammer(a + p, q - p)
        if den == 0.0:
            raise NonterminatingPoleError(
                f"nonterminating pole: ({b})_{q} / ({a})_{p} has a bare zero factor"
            )
        return 1.0 / den
    num = pochhammer(a, p)
    den = pochhammer(b, q)
    if den == 0.0:
        if num == 0.0:
            raise NonterminatingPoleError(
                f"nonterminating pole: 0/0 in ({a})_{p} / ({b})_{q} with distinct bases"
            )
        raise NonterminatingPoleError(f"nonterminating pole: ({b})_{q} = 0")
    return num / den


def _antidiagonals(ctrl: SeriesControl) -> Iterator[Tuple[int, range]]:
    for d in range(ctrl.max_index_s + ctrl.max_index_r + 1):
        s_lo = max(0, d - ctrl.max_index_r)
        s_hi = min(d, ctrl.max_index_s)
        yield d, range(s_lo, s_hi + 1)


def iter_double_series(
    term: Callable[[int, int], float],
    ctrl: SeriesControl = DEFAULT_CONTROL,
    support: Optional[Tuple[Optional[int], Optional[int], Optional[int]]] = None,
):
    """Yield ``(d, [(s, r, value), ...])`` anti-diagonal by anti-diagonal.

    ``support = (max_s, max_r, max_d)`` restricts the walk to indices known
    to carry non-zero terms; ``None`` entries are unbounded.
    """
    max_s, max_r, max_d = support if support is not None else (None, None, None)
    for d, srange in _antidiagonals(ctrl):
        if max_d is not None and d > max_d:
            return
        row = []
        for s in srange:
            r = d - s
            if max_s is not None and s > max_s:
                break
            if max_r is not None and r > max_r:
                continue
            row.append((s, r, term(s, r)))
        yield d, row


def support_is_finite(support) -> bool:
    if support is None:
        return False
    max_s, max_r, max_d = support
    return max_d is not None or (max_s is not None and max_r is not None)


def _support_within_caps(support, ctrl: SeriesControl) -> bool:
    max_s, max_r, max_d = support
    if max_d is not None:
        return max_d <= min(ctrl.max_index_s, ctrl.max_index_r) or (
            max_s is not None and max_r is not None
            and max_s <= ctrl.max_index_s and max_r <= ctrl.max_index_r
        )
    return max_s <= ctrl.max_index_s and max_r <= ctrl.max_index_r


_ZERO_RUN = 3


def _diagonal_sum(values):
    # exact float64 sum; extended-precision terms are summed in their own type
    if all(type(v) is float for v in values):
        return math.fsum(values)
    total = values[0] * 0
    for v in values:
        total += v
    return total


def sum_double_series(
    term: Callable[[int, int], float],
    ctrl: SeriesControl = DEFAULT_CONTROL,
    support=None,
) -> SeriesResult:
    """Sum ``term(s, r)`` over ``s, r >= 0``.

    Anti-diagonals are added in increasing ``d``; the walk stops once three
    consecutive anti-diagonal sums are each below ``rel_tol * |partial sum|``.
    A finite ``support`` is summed exactly and reported as terminated, as is a
    series whose last three anti-diagonals are exactly zero.
    """
    finite = support_is_finite(support) and _support_within_caps(support, ctrl)
    total = 0.0
    used = 0
    small_run = 0
    zero_run = 0
    last = 0.0
    seen_nonzero = False
    for _, row in iter_double_series(term, ctrl, support):
        if not row:
            diag = 0.0
        else:
            diag = _diagonal_sum([v for _, _, v in row])
        used += len(row)
        total += diag
        if not math.isfinite(total):
            raise NoConvergenceError(f"series diverges: partial sum {float(total)!r} after {used} terms")
        if finite:
            continue
        last = abs(diag)
        if any(v != 0 for _, _, v in row):
            seen_nonzero = True
            zero_run = 0
        else:
            zero_run += 1
        if abs(diag) < ctrl.rel_tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= _ZERO_RUN:
            if zero_run >= _ZERO_RUN:
                return SeriesResult(float(total), 0.0, used, True)
            return SeriesResult(float(total), float(last), used, False)
        if zero_run >= _ZERO_RUN and not seen_nonzero:
            return SeriesResult(0.0, 0.0, used, True)
    if finite:
        return SeriesResult(float(total), 0.0, used, True)
    raise NoConvergenceError(
        f"no convergence within caps ({ctrl.max_index_s}, {ctrl.max_index_r}); "
        f"partial sum {total!r}, last anti-diagonal {last!r}"
    )


def sum_series(
    term: Callable[[int], float],
    ctrl: SeriesControl = DEFAULT_CONTROL,
    max_index: Optional[int] = None,
) -> SeriesResult:
    """One-index version of :func:`sum_double_series` with the same stop rule."""
    cap = ctrl.max_index_s
    if max_index is not None and max_index <= cap:
        vals = [term(n) for n in range(max_index + 1)]
        return SeriesResult(float(_diagonal_sum(vals)), 0.0, len(vals), True)
    total = 0.0
    small_run = 0
    zero_run = 0
    last = 0.0
    for n in range(cap + 1):
        v = term(n)
        total += v
        if not math.isfinite(total):
            raise NoConvergenceError(f"series diverges: partial sum {float(total)!r} after {n + 1} terms")
        last = abs(v)
        zero_run = zero_run + 1 if v == 0.0 else 0
        small_run = small_run + 1 if abs(v) < ctrl.rel_tol * abs(total) else 0
        if small_run >= _ZERO_RUN:
            if zero_run >= _ZERO_RUN:
                return SeriesResult(float(total), 0.0, n + 1, True)
            return SeriesResult(float(total), float(last), n + 1, False)
    raise NoConvergenceError(f"no convergence within {cap} terms; partial sum {float(total)!r}")


def power(base: float, e: float) -> float:
    """``base ** e`` with the ``0 ** 0 = 1`` convention used by all series."""
    if e == 0:
        return 1.0
    return base ** e
