"""Compare the compiled kernels with the NumPy fallback.

Run ``python benchmarks/bench_kernels.py [--repeat N]``. Each kernel is timed
on both backends with identical inputs, and the largest relative difference
between the two outputs is printed next to the timings.
"""

import argparse
import sys
import timeit

import numpy as np

from hkfrac import _kernels_py

try:
    from hkfrac import _kernels
except ImportError:  # extension not built
    _kernels = None


def _cases(rng):
    # coefficient table sizes typical of n <= 8 polynomials and truncated series
    for ns, nr, npts in ((5, 9, 81), (16, 16, 400), (30, 30, 2000)):
        coef = rng.normal(size=(ns, nr)) / np.arange(1, ns * nr + 1).reshape(ns, nr)
        ex = np.arange(ns)
        ey = 2 * np.arange(nr)
        x = rng.uniform(-1.5, 1.5, npts)
        y = rng.uniform(0.0, 1.5, npts)
        side = int(np.sqrt(npts))
        yield f"double_power_sum {ns}x{nr} @ {npts} pts", "double_power_sum", (coef, ex, ey, x, y)
        yield (f"double_power_grid {ns}x{nr} @ {side}x{side}", "double_power_grid",
               (coef, ex, ey, x[:side], y[:side]))
    for n in (20, 64, 200):
        wx = rng.uniform(size=n)
        wy = rng.uniform(size=n)
        vals = rng.normal(size=(n, n))
        yield f"weighted_grid_sum {n}x{n}", "weighted_grid_sum", (wx, wy, vals)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'case':44s} {'compiled [us]':>14s} {'numpy [us]':>12s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, name, inputs in _cases(rng):
        fast = getattr(_kernels, name)
        slow = getattr(_kernels_py, name)
        t_fast = min(timeit.repeat(lambda: fast(*inputs), number=args.number, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*inputs), number=args.number, repeat=args.repeat))
        a = np.asarray(fast(*inputs), dtype=float)
        b = np.asarray(slow(*inputs), dtype=float)
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
        us = 1e6 / args.number
        print(f"{label:44s} {t_fast * us:14.1f} {t_slow * us:12.1f} {t_slow / t_fast:8.1f} {diff:13.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
