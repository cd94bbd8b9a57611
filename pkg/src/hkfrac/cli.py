"""``hkfrac`` command line: ``eval``, ``verify`` and ``table``.

Exit codes: 0 when every check passes or is flagged, 1 on any failed check,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from . import kernels
from . import polynomials as poly
from . import verify
from .core import SeriesResult
from .mittag_leffler import MLParams3, MLParams4, ml_hk3, ml_hk4, ml_jk2, ml_prabhakar
from .quadrature import biorthogonality_matrix, build_rule, rule_size_for_degree


class UsageError(Exception):
    pass


def _int(v: float) -> int:
    if float(v) != int(v):
        raise UsageError(f"expected an integer, got {v!r}")
    return int(v)


def _poly(fn: Callable[..., float]):
    # finite sums carry no truncation error
    def run(**kw):
        return float(fn(**kw)), 0.0

    return run


def _series(fn: Callable[..., SeriesResult]):
    def run(**kw):
        res = fn(**kw)
        return float(res.value), float(res.abs_error_est)

    return run


# name -> (required parameters, optional defaults, evaluator)
FUNCTIONS: Dict[str, Tuple[Tuple[str, ...], Dict[str, float], Callable]] = {
    "hermite": (("n", "x"), {}, _poly(lambda n, x: poly.hermite(_int(n), x))),
    "konhauser_z": (("n", "rho", "x"), {"k": 1},
                    _poly(lambda n, rho, k, x: poly.konhauser_z(_int(n), rho, _int(k), x))),
    "konhauser_y": (("n", "rho", "x"), {"k": 1},
                    _poly(lambda n, rho, k, x: poly.konhauser_y(_int(n), rho, _int(k), x))),
    "hk2d": (("n", "rho", "x", "y"), {"k": 1},
             _poly(lambda n, rho, k, x, y: poly.hk2d(poly.HK2DParams(_int(n), rho, _int(k)), x, y))),
    "hk2d_partner": (("n", "rho", "x", "y"), {"k": 1},
                     _poly(lambda n, rho, k, x, y: poly.hk2d_partner(_int(n), rho, _int(k), x, y))),
    "hk2d_modified": (("n", "kappa", "rho", "c", "x", "y"), {"k": 1},
                      _poly(lambda n, kappa, rho, c, k, x, y: poly.hk2d_modified(
                          poly.ModHK2DParams(_int(n), kappa, rho, c, _int(k)), x, y))),
    "jk2d": (("n", "alpha", "rho", "x", "y"), {"k": 1},
             _poly(lambda n, alpha, rho, k, x, y: poly.jk2d(_int(n), alpha, rho, _int(k), x, y))),
    "ml_prabhakar": (("alpha", "beta", "gamma", "z"), {}, _series(ml_prabhakar)),
    "ml_hk3": (("g1", "g2", "g3", "rho", "x", "y"), {"k": 1},
               _series(lambda g1, g2, g3, rho, k, x, y: ml_hk3(MLParams3(g1, g2, g3, rho, _int(k)), x, y))),
    "ml_hk4": (("g1", "g2", "g3", "g4", "kappa", "rho", "x", "y"), {"k": 1},
               _series(lambda g1, g2, g3, g4, kappa, rho, k, x, y: ml_hk4(
                   MLParams4(g1, g2, g3, g4, kappa, rho, _int(k)), x, y))),
    "ml_jk2": (("g1", "g2", "kappa", "rho", "x", "y"), {"k": 1},
               _series(lambda g1, g2, kappa, rho, k, x, y: ml_jk2(g1, g2, kappa, rho, _int(k), x, y))),
}


INTEGER_PARAMS = frozenset({"n", "k"})


def parse_axis(text: str) -> List[float]:
    """``"1.5"``, ``"0,1,2"`` or ``"start:stop:count"`` (inclusive linspace)."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return [float(v) for v in np.linspace(a, b, n)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed axis spec {text!r}") from None


def parse_assignments(items: Sequence[str]) -> Dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise UsageError(f"expected key=value, got {item!r}")
        out[key] = value
    return out


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(rows: List[dict], fmt: str, stream):
    if fmt == "json":
        for row in rows:
            stream.write(json.dumps(row) + "\n")
        return
    if not rows:
        return
    writer = csv.writer(stream, lineterminator="\r\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in header])


def write_matrix(mat: np.ndarray, stream):
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(["n"] + [str(m) for m in range(mat.shape[1])])
    for n, row in enumerate(mat):
        writer.writerow([str(n)] + [repr(float(v)) for v in row])


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    if args.function not in FUNCTIONS:
        raise UsageError(f"unknown function {args.function!r}; choose from {sorted(FUNCTIONS)}")
    required, defaults, fn = FUNCTIONS[args.function]
    given = parse_assignments(args.params)
    unknown = set(given) - set(required) - set(defaults)
    if unknown:
        raise UsageError(f"unknown parameters {sorted(unknown)} for {args.function}")
    missing = [r for r in required if r not in given]
    if missing:
        raise UsageError(f"missing parameters {missing} for {args.function}")
    names = list(required) + [d for d in defaults]
    axes = [parse_axis(given[n]) if n in given else [float(defaults[n])] for n in names]
    rows = []
    for combo in itertools.product(*axes):
        kw = dict(zip(names, combo))
        try:
            value, err = fn(**kw)
        except UsageError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise UsageError(f"{args.function}: {exc}") from None
        row = {n: (int(kw[n]) if n in INTEGER_PARAMS else kw[n]) for n in names}
        row.update(value=value, abs_error_est=err)
        rows.append(row)
    write_rows(rows, args.format or "csv", args.stream)
    return 0


def cmd_verify(args) -> int:
    tol = dict(verify.TOLERANCES)
    for key, value in parse_assignments(args.tol).items():
        if key not in tol:
            raise UsageError(f"unknown tolerance key {key!r}; choose from {sorted(tol)}")
        try:
            tol[key] = float(value)
        except ValueError:
            raise UsageError(f"malformed tolerance {value!r}") from None
    ctx = verify.Context(seed=args.seed, tol=tol)
    checks = verify.select(args.suite, args.seed)
    failed = 0
    counts = {s: 0 for s in verify.STATUSES}
    fmt = args.format or "json"
    reports = []
    for rep in verify.run_checks(checks, ctx, jobs=args.jobs, timing=args.timing):
        counts[rep.status] += 1
        failed += rep.status == "fail"
        if fmt == "json":
            args.stream.write(rep.to_json() + "\n")
            args.stream.flush()
        else:
            reports.append(verify.asdict(rep))
    if fmt == "csv":
        write_rows(reports, "csv", args.stream)
    summary = ", ".join(f"{k}={v}" for k, v in counts.items())
    print(f"verify {args.suite}: {summary} (seed {args.seed})", file=sys.stderr)
    return 1 if failed else 0


def _table_hk_biortho(opts) -> np.ndarray:
    n_max = _int(float(opts.get("n_max", 4)))
    rho = float(opts.get("rho", 0.0))
    k = _int(float(opts.get("k", 1)))
    rx = build_rule("hermite", rule_size_for_degree(2 * n_max))
    ry = build_rule("laguerre", rule_size_for_degree((k + 1) * n_max), rho)
    rep = biorthogonality_matrix(lambda n, X, Y: poly.hk2d(poly.HK2DParams(n, rho, k), X, Y),
                                 lambda m, X, Y: poly.hk2d_partner(m, rho, k, X, Y), n_max, rx, ry)
    return rep.matrix


PRESETS = {
    "hk-biortho-matrix": ("n_max", "rho", "k"),
    "kernel-semigroup": ("x", "y", "N"),
    "l1-bounds": ("count",),
}


def cmd_table(args) -> int:
    if args.preset is None:
        args.parser.print_usage(sys.stderr)
        raise UsageError(f"table needs a preset; choose from {sorted(PRESETS)}")
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    opts = parse_assignments(args.params)
    unknown = set(opts) - set(PRESETS[args.preset])
    if unknown:
        raise UsageError(f"unknown options {sorted(unknown)} for {args.preset}")
    try:
        if args.preset == "hk-biortho-matrix":
            write_matrix(_table_hk_biortho(opts), args.stream)
            return 0
        if args.preset == "kernel-semigroup":
            rows = verify.semigroup_rows(float(opts.get("x", 0.9)), float(opts.get("y", 0.8)),
                                         _int(float(opts.get("N", 20))))
        else:
            ctx = verify.Context(seed=args.seed)
            rows = verify.l1_bound_rows(ctx.rng("kernel-l1-bound"), _int(float(opts.get("count", 10))))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_rows(rows, args.format or "csv", args.stream)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized cases (u64)")

    parser = argparse.ArgumentParser(prog="hkfrac", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print backend information and exit")
    sub = parser.add_subparsers(dest="command")

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a function on a grid")
    p_eval.add_argument("function")
    p_eval.add_argument("params", nargs="*", metavar="key=value",
                        help="scalar, comma list or start:stop:count")
    p_eval.set_defaults(run=cmd_eval)

    p_ver = sub.add_parser("verify", parents=[common], help="run identity and certification checks")
    p_ver.add_argument("suite", nargs="?", default="all", choices=verify.SUITES)
    p_ver.add_argument("--tol", action="append", default=[], metavar="key=value",
                       help="override one tolerance; repeatable")
    p_ver.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_ver.add_argument("--timing", action="store_true",
                       help="record runtime_ms (reports are then not byte-reproducible)")
    p_ver.set_defaults(run=cmd_verify)

    p_tab = sub.add_parser("table", parents=[common], help="emit a numeric table as CSV")
    p_tab.add_argument("preset", nargs="?")
    p_tab.add_argument("params", nargs="*", metavar="key=value")
    p_tab.set_defaults(run=cmd_table, parser=p_tab)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        print(f"hkfrac kernels backend: {kernels.BACKEND}")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    buffer = io.StringIO()
    args.stream = buffer
    try:
        code = args.run(args)
    except UsageError as exc:
        print(f"hkfrac: error: {exc}", file=sys.stderr)
        return 2
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
