import json
import math

import numpy as np
import pytest

from magbag.cli import main


def run_cli(args):
    return main(args)


def test_place_writes_csv(tmp_path):
    out = tmp_path / "theta.csv"
    code = run_cli(["place", "--n", "100", "--m", "16", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "index,band,x,y,z,r_p"
    assert len(lines) == 101
    R = 100 * (1 + 1.6 * math.log(100))
    for line in lines[1:]:
        cells = line.split(",")
        radius = math.sqrt(sum(float(v) ** 2 for v in cells[2:5]))
        assert abs(radius - R) < 1e-9 * R


def test_place_rejects_small_charge(capsys):
    assert run_cli(["place", "--n", "7"]) == 2
    assert "charge" in capsys.readouterr().err


def test_place_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_cli(["place", "--n", "64", "--m", "16", "--out", str(a)])
    run_cli(["place", "--n", "64", "--m", "16", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_profile_core_mode(tmp_path):
    out = tmp_path / "prof.csv"
    code = run_cli(
        ["profile", "--n", "1", "--quad", "512", "--r-min", "1", "--r-max", "3",
         "--steps", "5", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 6
    radii = [float(l.split(",")[0]) for l in lines[1:]]
    assert radii == sorted(radii) and radii[0] == 1.0
    row2 = [float(v) for v in lines[1 + 2].split(",")]  # r = 2
    assert row2[0] == 2.0
    assert row2[2] == pytest.approx(1 / math.tanh(2) - 0.5, abs=1e-6)


def test_profile_glued_mode(tmp_path, cfg100):
    out = tmp_path / "prof.csv"
    code = run_cli(
        ["profile", "--n", "100", "--m", "16", "--quad", "1024", "--r-min", "0.5",
         "--r-max", "2.0", "--steps", "4", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    last = [float(v) for v in lines[-1].split(",")]
    assert last[0] == pytest.approx(2 * cfg100.R, rel=1e-12)
    assert last[2] == pytest.approx(1 - 100 / (2 * cfg100.R), rel=0.02)


def test_verify_algebra_suite(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(["verify", "--suite", "algebra", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert all(item["pass"] for item in report)
    assert {"check", "value", "bound", "pass"} <= set(report[0])


def test_verify_unknown_suite():
    assert run_cli(["verify", "--suite", "nonsense"]) == 2


def test_config_file_and_override(tmp_path):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps({"n": 64, "m": 16.0, "quad": 512}))
    out = tmp_path / "theta.csv"
    code = run_cli(["place", "--config", str(cfgfile), "--out", str(out)])
    assert code == 0
    assert len(out.read_text().strip().split("\n")) == 65
    # flag overrides the file
    out2 = tmp_path / "theta2.csv"
    code = run_cli(["place", "--config", str(cfgfile), "--n", "100", "--out", str(out2)])
    assert code == 0
    assert len(out2.read_text().strip().split("\n")) == 101


def test_config_rejects_unknown_keys(tmp_path):
    cfgfile = tmp_path / "bad.json"
    cfgfile.write_text(json.dumps({"charge": 64}))
    assert run_cli(["place", "--config", str(cfgfile)]) == 2


def test_invalid_flags():
    assert run_cli(["profile", "--n", "1", "--quad", "64"]) == 2  # quad too small
    assert run_cli(["profile", "--n", "1", "--h", "1.0"]) == 2
    assert run_cli(["verify", "--n", "3"]) == 2
