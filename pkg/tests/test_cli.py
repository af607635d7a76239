import csv
import io
import json
import subprocess
import sys

import pytest

from uvorbits.bipoly import BiPoly, RatFunc, parse
from uvorbits.cli import EXIT_ERROR, EXIT_MISMATCH, EXIT_USAGE, run
from uvorbits.dynamics import derive_period_curve, eigenvalue_symbolic


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_curve_json(capsys):
    code, out, err = call(capsys, "curve", "3")
    assert code == 0 and not err
    data = json.loads(out)
    assert BiPoly.from_json(data) == parse("u*v + v + 1")
    assert data["period"] == 3


@pytest.mark.parametrize("n", [1, 2, 4, 5])
def test_curve_round_trip(capsys, n):
    code, out, _ = call(capsys, "curve", str(n))
    assert BiPoly.from_json(json.loads(out)).to_json() == derive_period_curve(n).poly.to_json()


def test_eigenvalue_json(capsys):
    code, out, _ = call(capsys, "eigenvalue", "3")
    assert RatFunc.from_json(json.loads(out)) == eigenvalue_symbolic(3)


def test_classify_example(capsys):
    code, out, _ = call(capsys, "classify", "-1", "-0.5", "2")
    assert code == 0 and out == "attracting, lambda=0.75\n"


def test_classify_xy_plane(capsys):
    # 2-cycle of x^2 - 1: (0, -1)
    code, out, _ = call(capsys, "--plane", "xy", "classify", "0", "-1", "2")
    assert out.startswith("super_attracting, lambda=0")


def test_classify_errors_are_single_json_lines(capsys):
    code, out, err = call(capsys, "classify", "1", "5", "3")
    assert code == EXIT_ERROR and not out
    lines = err.strip().split("\n")
    assert len(lines) == 1 and json.loads(lines[0])["error"] == "NotPeriodic"


@pytest.mark.parametrize("argv", [
    ["curve"], ["curve", "0"], ["curve", "x"], ["nope"], ["curve", "3", "--bogus"],
    ["curve", "3", "--format", "csv"], ["--precision", "8", "curve", "3"],
])
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == EXIT_USAGE
    assert len(err.strip().split("\n")) == 1 and json.loads(err)["error"] == "usage"


def test_transform_and_c_value_exact(capsys):
    code, out, _ = call(capsys, "--plane", "xy", "transform", "1/2", "1/3")
    assert json.loads(out) == {"plane": "UV", "first": "5/6", "second": "25/36"}
    code, out, _ = call(capsys, "c-value", "1", "1")
    assert json.loads(out)["c"] == "1/4"


def test_critical_csv(capsys):
    code, out, _ = call(capsys, "critical", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9 and {r["class"] for r in rows} == {"super_attracting"}


def test_neutral_target(capsys):
    code, out, _ = call(capsys, "neutral", "2", "--target", "-1")
    data = json.loads(out)
    assert data["targets"] == [-1] and len(data["points"]) == 2


def test_tables_period_four(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, out, err = call(capsys, "tables", "--period", "4", "--diff", "--out", str(path))
    assert code == 0
    assert not [l for l in err.splitlines() if l.startswith("mismatch")]
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 24
    assert all(float(r["distance"]) < 1e-6 for r in rows)


def test_tables_mismatch_exit_code(capsys):
    code, out, err = call(capsys, "tables", "--table", "critical-3", "--diff", "--tol", "1e-12")
    assert code == EXIT_MISMATCH
    assert err.startswith("mismatch: table critical-3")


def test_reproducible_outputs(capsys, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"s{k}.csv"
        run(["sweep", "--steps", "40", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_figures_command(capsys, tmp_path):
    code, out, _ = call(capsys, "figures", "--period-max", "1", "--resolution", "21,21",
                        "--out", str(tmp_path), "--format", "svg")
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert all(f["file"].endswith(".svg") for f in man["files"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "uvorbits", "curve", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and BiPoly.from_json(json.loads(out.stdout)) == parse("u + 1")
