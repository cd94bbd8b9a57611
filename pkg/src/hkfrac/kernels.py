"""Selects the compiled kernels when built, the NumPy fallback otherwise."""

import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("HKFRAC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

double_power_sum = _impl.double_power_sum
double_power_grid = _impl.double_power_grid
weighted_grid_sum = _impl.weighted_grid_sum
