import csv
import io
import subprocess
import sys

import pytest

from pshlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run, worker_count
from pshlab.config import ExperimentConfig


def _read(path):
    data = path.read_bytes()
    return data, list(csv.reader(io.StringIO(data.decode("utf-8"))))


def test_density_grid(tmp_path):
    assert run(["density", "--weight", "atom 0 1", "--out", str(tmp_path)]) == EXIT_OK
    data, rows = _read(tmp_path / "density.csv")
    assert rows[0] == ["weight", "theta", "density", "verdict"]
    assert len(rows) == 4097
    assert {r[2] for r in rows[1:]} == {"1.000000000000e+00"}
    assert b"\r" not in data and data.endswith(b"\n")
    assert (tmp_path / "density-report.txt").exists()


def test_membership_row(tmp_path):
    code = run(["membership", "--f", "pow 0.3", "--weight", "radial 0.5", "--p", "2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    _, rows = _read(tmp_path / "membership.csv")
    row = dict(zip(rows[0], rows[1]))
    assert row["verdict"] == "non_member"
    assert float(row["exponent"]) == pytest.approx(1.1)
    assert row["exponent"] == "1.100000000000e+00"
    assert row["classical_member"] == "true"


def test_probe_and_isometry(tmp_path):
    assert run(["probe", "--f", "affine 1 0.5", "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _read(tmp_path / "probe.csv")
    assert len(rows) == 5 and rows[1][5] == "true"
    assert run(["isometry", "--f", "pow 0.3", "--weight", "radial 0.5", "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _read(tmp_path / "isometry.csv")
    assert rows[1][7] == "non_member" and rows[1][3] == "inf"


def test_norm_and_deflate_with_config(tmp_path):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text("command: deflate\nweights: [atom 0.3 1]\nfunctions: [affine 1 -0.5]\np: [2]\n")
    assert run(["deflate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _read(tmp_path / "deflate.csv")
    row = dict(zip(rows[0], rows[1]))
    assert float(row["relative_gap"]) <= 1e-4
    assert run(["norm", "--weight", "atom 0.5 1", "--f", "affine 1 1", "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _read(tmp_path / "norm.csv")
    assert float(dict(zip(rows[0], rows[1]))["relative_gap"]) <= 1e-3


def test_measure_rows(tmp_path):
    code = run(["measure", "--weight", "atom 0.5 1", "--f", "z", "--r-grid=-1,-0.1,-0.01", "--out", str(tmp_path)])
    assert code == EXIT_OK
    _, rows = _read(tmp_path / "measure.csv")
    vals = [float(r[4]) for r in rows[1:]]
    assert len(vals) == 3 and vals == sorted(vals)


def test_deterministic_output(tmp_path):
    args = ["norm", "--weight", "atom 0.3 1 + atom 0 -0.4 1", "--f", "affine 1 1", "--f", "pow 0.2", "--p", "1.5,2"]
    assert run(args + ["--out", str(tmp_path / "a")]) == EXIT_OK
    assert run(args + ["--out", str(tmp_path / "b")]) == EXIT_OK
    assert (tmp_path / "a" / "norm.csv").read_bytes() == (tmp_path / "b" / "norm.csv").read_bytes()


@pytest.mark.parametrize("argv", [
    ["density"],
    ["norm", "--weight", "atom 0.5 1"],
    ["norm", "--weight", "atom 1.5 1", "--f", "z"],
    ["membership", "--weight", "radial 0.5", "--f", "pow"],
    ["measure", "--weight", "atom 0 1", "--f", "z", "--r-grid=0.5"],
    ["probe", "--f", "z", "--t-grid", "1.5"],
    ["fly"],
    ["density", "--bogus"],
])
def test_usage_errors_exit_two(argv, tmp_path):
    assert run(argv + ["--out", str(tmp_path)]) == EXIT_USAGE


def test_config_error_reports_location(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("command: norm\nweights: [atom 0.5 1]\nfunctionz: [z]\n")
    assert run(["norm", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "line 3, column 1" in capsys.readouterr().err


def test_verify_failure_exits_one(tmp_path, capsys, monkeypatch):
    from pshlab import cli
    from pshlab.suite import Check

    monkeypatch.setattr(cli, "run_suite", lambda name, tol: [Check("outer-isometry", "x", 1.0, 0.0, False),
                                                             Check("deflation-invariance", "y", 0.0, 1.0, True)])
    assert run(["verify", "--out", str(tmp_path)]) == EXIT_FAIL
    err = capsys.readouterr().err
    assert "outer-isometry" in err and "deflation-invariance" not in err


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("PSHLAB_THREADS", "1")
    assert worker_count(ExperimentConfig(command="norm", threads=8)) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pshlab", "density", "--weight", "atom 0.5 1", "--grid-size", "16",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "pshlab density" in proc.stdout
    assert len((tmp_path / "density.csv").read_text().splitlines()) == 17
