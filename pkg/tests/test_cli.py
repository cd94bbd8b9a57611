import csv
import io
import json
import math

import pytest

from hkfrac import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_hk2d_example(capsys):
    code, out, _ = run(capsys, "eval", "hk2d", "n=1", "rho=0", "k=1", "x=1", "y=2")
    assert code == 0
    (row,) = rows(out)
    assert float(row["value"]) == -2.0
    assert row["n"] == "1" and row["k"] == "1"


def test_eval_ml_hk3_exponential(capsys):
    code, out, _ = run(capsys, "eval", "ml_hk3", "g1=0", "g2=1", "g3=0", "rho=1", "k=1", "x=0", "y=0.5")
    assert code == 0
    assert float(rows(out)[0]["value"]) == pytest.approx(math.exp(0.5), rel=1e-15)


def test_eval_hermite_zero(capsys):
    code, out, _ = run(capsys, "eval", "hermite", "n=0", "x=0")
    assert code == 0 and float(rows(out)[0]["value"]) == 1.0


def test_eval_grid_axes(capsys):
    code, out, _ = run(capsys, "eval", "hermite", "n=0,1,2", "x=0:1:3", "--format", "json")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 9
    assert {r["x"] for r in recs} == {0.0, 0.5, 1.0}
    h2 = [r for r in recs if r["n"] == 2 and r["x"] == 1.0][0]
    assert h2["value"] == 2.0


@pytest.mark.parametrize("argv", [
    ("eval", "nosuch", "x=1"),
    ("eval", "hermite", "x=1"),
    ("eval", "hermite", "n=1", "x=1", "bogus=2"),
    ("eval", "hermite", "n=1.5", "x=1"),
    ("eval", "hermite", "n=1", "x=1:2"),
    ("eval", "hermite", "n"),
    ("verify", "all", "--tol", "nosuch=1"),
    ("table", "nosuch"),
    ("table",),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_no_command_prints_usage(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


def test_version_reports_backend(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "backend" in out


def test_table_hk_biortho_matrix(capsys):
    code, out, _ = run(capsys, "table", "hk-biortho-matrix", "n_max=4", "rho=0", "k=2")
    assert code == 0
    assert "\r\n" in out
    lines = list(csv.reader(io.StringIO(out)))
    assert lines[0] == ["n", "0", "1", "2", "3", "4"]
    for n, line in enumerate(lines[1:]):
        vals = [float(v) for v in line[1:]]
        expect = 2 ** n * math.factorial(n) * math.sqrt(math.pi)
        assert vals[n] == pytest.approx(expect, rel=1e-12)
        assert max(abs(v) for m, v in enumerate(vals) if m != n) <= 1e-10 * expect


def test_table_l1_bounds(capsys):
    code, out, _ = run(capsys, "table", "l1-bounds", "count=2", "--seed", "5")
    assert code == 0
    recs = rows(out)
    assert len(recs) == 2
    for r in recs:
        assert float(r["norm_image"]) <= float(r["K"]) * float(r["norm_psi"])


def test_verify_suite_passes_and_writes_file(capsys, tmp_path):
    target = tmp_path / "reports.jsonl"
    code, out, err = run(capsys, "verify", "biorthogonality", "--out", str(target))
    assert code == 0 and out == ""
    reps = [json.loads(line) for line in target.read_text().splitlines()]
    assert len(reps) == 18
    assert {r["status"] for r in reps} == {"pass"}
    assert all(set(r) == {"check_id", "paper_anchor", "status", "max_rel_err", "runtime_ms", "details", "seed"}
               for r in reps)
    assert "fail=0" in err


def test_verify_laplace_flags_one_variant(capsys):
    code, out, _ = run(capsys, "verify", "laplace")
    assert code == 0
    reps = [json.loads(line) for line in out.splitlines()]
    variants = [r for r in reps if r["check_id"].startswith("laplace-1d-variants")]
    assert variants and all(r["status"] == "flagged" for r in variants)
    assert all(r["status"] == "pass" for r in reps if r["check_id"].startswith("laplace-2d"))


def test_verify_failure_exit_code(capsys):
    # an impossible tolerance turns the checks into failures
    code, out, _ = run(capsys, "verify", "jk", "--tol", "jk_upper=-1")
    assert code == 1
    assert json.loads(out.splitlines()[0])["status"] == "fail"


def test_verify_is_deterministic(capsys):
    _, first, _ = run(capsys, "verify", "laplace", "--seed", "42")
    _, second, _ = run(capsys, "verify", "laplace", "--seed", "42")
    _, parallel, _ = run(capsys, "verify", "laplace", "--seed", "42", "--jobs", "2")
    assert first == second == parallel
    _, other, _ = run(capsys, "verify", "laplace", "--seed", "7")
    assert other != first


def test_verify_csv_format(capsys):
    code, out, _ = run(capsys, "verify", "jk", "--format", "csv")
    assert code == 0
    (rec,) = rows(out)
    assert rec["status"] == "flagged"
