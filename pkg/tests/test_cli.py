import json
import logging
import subprocess
import sys

import pytest

from zindler import cli, period_engine
from zindler.cli import RunConfig, parse_grid, run
from zindler.scalar_kernel import H0, H_MAX


def test_period_scan_rows(capsys):
    assert run(["period-scan", "--h", "2.42:2.59:50"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == period_engine.CSV_HEADER
    assert len(lines) == 51


def test_verify_proof(capsys):
    assert run(["verify-proof"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["conclusion"] == "empty_feasible_set"


def test_verify_bounds(capsys):
    assert run(["verify-bounds", "--h", "2.5", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["pass"] and out["audits"][0]["lower_margin"] >= -1e-12


def test_verify_bounds_default_grid(capsys):
    assert run(["verify-bounds"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 51


def test_audit_failure_exit_code(monkeypatch, capsys):
    real = period_engine.audit_parabolic_bounds

    def broken(H, grid_points=1001):
        a = real(H, grid_points)
        return type(a)(**{**a.__dict__, "upper_margin": -1.0})

    monkeypatch.setattr(period_engine, "audit_parabolic_bounds", broken)
    assert run(["verify-bounds", "--h", "2.5"]) == 1


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["period-scan", "--h", "abc"], ["period-scan", "--h", "2.5:2.4:3"],
    ["carousel-defect", "--curve", "square:1"], ["carousel-defect", "--n", "2"],
    ["levelsets", "--levels", "9"], ["orbit", "--x", "2.0"], ["period-scan", "--step", "-1"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_grid_clamping(caplog):
    with caplog.at_level(logging.WARNING, logger="zindler"):
        lo, hi, n = parse_grid("1:9:3")
    assert H0 < lo < hi < H_MAX and n == 3
    assert "clamped" in caplog.text
    assert parse_grid("2.5") == (2.5, 2.5, 1)
    assert list(RunConfig("period-scan", (2.5, 2.5, 1)).energies()) == [2.5]


def test_deterministic_output(capsys):
    run(["period-scan", "--h", "2.45:2.55:5", "--format", "json"])
    a = capsys.readouterr().out
    run(["period-scan", "--h", "2.45:2.55:5", "--format", "json"])
    assert a == capsys.readouterr().out
    assert ", " not in a
    assert len(json.loads(a)["dT_signs"]) == 4


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scan\nh = 2.45:2.55:3\nformat = json\n")
    assert run(["period-scan", "--config", str(cfg)]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 3
    assert run(["period-scan", "--config", str(cfg), "--h", "2.5", "--format", "csv"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    assert run(["period-scan", "--config", str(bad)]) == 2


def test_carousel_defect(capsys, tmp_path):
    assert run(["carousel-defect", "--curve", "circle:2", "--n", "6", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["carousel_defect"] < 1e-10 and out["midpoint_parallel_defect"] < 1e-6
    assert run(["carousel-defect", "--curve", "ellipse:2,1", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "polygon.csv").exists()


def test_figures_and_reconstruct(tmp_path, capsys):
    assert run(["levelsets", "--out", str(tmp_path), "--levels", "2.42,2.55"]) == 0
    first = (tmp_path / "levelsets.svg").read_text()
    assert run(["levelsets", "--out", str(tmp_path), "--levels", "2.42,2.55"]) == 0
    assert first == (tmp_path / "levelsets.svg").read_text()
    assert run(["orbit", "--h", "2.5", "--out", str(tmp_path), "--frames", "3"]) == 0
    for name in ("orbit.csv", "orbit.svg", "hexagon_frames.svg"):
        assert (tmp_path / name).exists()
    capsys.readouterr()
    assert run(["reconstruct", "--x", "2.0", "--y", "2.2", "--out", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert summary["closure_defect"] > 1e-3


def test_closure_scan(capsys):
    assert run(["closure-scan", "--h", "2.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "H,closure_defect,radius_residual" and len(lines) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zindler", "verify-proof", "--kmax", "2", "--mmax", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["conclusion"] == "empty_feasible_set"
