"""NumPy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or disabled
through ``HKFRAC_PURE_PYTHON=1``. Signatures and the ``longdouble``
working precision match the extension.
"""

import numpy as np

_LD = np.longdouble


def _powers(values, exponents):
    # 0**0 == 1 in numpy, matching the series convention
    return np.power.outer(np.asarray(values, dtype=_LD), np.asarray(exponents).astype(_LD))


def double_power_sum(coef, ex, ey, x, y):
    """Pointwise ``sum_{s,r} coef[s, r] * x**ex[s] * y**ey[r]``."""
    coef = np.asarray(coef, dtype=_LD)
    xp = _powers(x, ex)
    yp = _powers(y, ey)
    return np.einsum("is,sr,ir->i", xp, coef, yp).astype(np.float64)


def double_power_grid(coef, ex, ey, xs, ys):
    """Tensor grid ``out[i, j] = sum_{s,r} coef[s, r] xs[i]**ex[s] ys[j]**ey[r]``."""
    coef = np.asarray(coef, dtype=_LD)
    return (_powers(xs, ex) @ coef @ _powers(ys, ey).T).astype(np.float64)


def weighted_grid_sum(wx, wy, values):
    """``sum_{i,j} wx[i] * wy[j] * values[i, j]``."""
    v = np.asarray(values, dtype=_LD)
    return float(np.asarray(wx, dtype=_LD) @ v @ np.asarray(wy, dtype=_LD))
