import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from biphoton.cli import main

ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pm_angle(capsys):
    code, out, _ = run(capsys, "pm-angle", "--pump-nm", "405")
    assert code == 0
    fields = dict(line.split() for line in out.splitlines())
    assert float(fields["theta_deg"]) == pytest.approx(41.4211, abs=1e-4)
    assert abs(float(fields["delta_k_rad_per_um"])) < 1e-10


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs")
    fields = dict(line.split() for line in out.splitlines())
    assert code == 0
    assert set(fields) == {"theta_rad", "rho_p_rad", "rho_s_rad", "d_s_fs_per_um", "d_i_fs_per_um"}


def test_report_default_asymmetry(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"filters": {"signal": {"bandwidth_nm": 5, "mode_waist_um": 10}, "idler": {"bandwidth_nm": 5, "mode_waist_um": 10}}}))
    code, out, _ = run(capsys, "report", "--config", str(cfg))
    assert code == 0
    header, values = list(csv.reader(io.StringIO(out)))
    row = dict(zip(header, map(float, values)))
    assert row["eta_s"] > row["eta_i"]


def test_report_json_to_file(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BIPHOTON_OUT", str(tmp_path))
    code, _, _ = run(capsys, "report", "--out", "r.json")
    assert code == 0
    assert json.loads((tmp_path / "r.json").read_text())["schema"] == "biphoton-report/1"


def test_slice_command(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "slice", "--mask", "none", "--domain", "spectral", "--points", "31", "--out", str(out), "--plot", str(tmp_path / "s.png"))
    assert code == 0
    assert len(out.read_text().splitlines()) == 32
    assert (tmp_path / "s.png").stat().st_size > 0


def test_sweep_command(capsys, tmp_path):
    spec = tmp_path / "sw.json"
    spec.write_text(json.dumps({"axes": [{"path": "/pump/waist_um", "start": 10, "stop": 100, "count": 4}]}))
    code, _, _ = run(capsys, "sweep", "--spec", str(spec), "--out", str(tmp_path / "o.csv"))
    assert code == 0
    assert len((tmp_path / "o.csv").read_text().splitlines()) == 5


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"pump":{"waist_um":-1}}')
    code, out, err = run(capsys, "report", "--config", str(bad))
    assert code == 1 and "/pump/waist_um" in err and out == ""
    zero = tmp_path / "zero.json"
    zero.write_text('{"filters":{"signal":{"mode_waist_um":0},"idler":{"mode_waist_um":0}}}')
    code, _, err = run(capsys, "report", "--config", str(zero))
    assert code == 2 and "q_i^y" in err
    code, _, _ = run(capsys, "report", "--config", str(tmp_path / "missing.json"))
    assert code == 1


def test_validate(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    assert "FAIL" not in out


def test_validation_failure_exit_code(capsys, monkeypatch):
    from biphoton import validation

    monkeypatch.setattr(validation, "MASS_RTOL", -1.0)
    monkeypatch.setattr(validation, "mass_checks", lambda label, forms, refine: [validation.Check("x", 1.0, 2.0, 1.0, 0.0)])
    code, out, _ = run(capsys, "validate")
    assert code == 3 and "FAIL" in out


def test_figure_command_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "biphoton.cli", "figure", "--spec", str(ROOT / "figs" / "fig5.json")]
    for d in ("a", "b"):
        subprocess.run(cmd + ["--out-dir", str(tmp_path / d)], check=True, capture_output=True)
    for name in ("fig5a.csv", "fig5b.csv", "fig5a.png"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
