import json
import subprocess
import sys

import pytest

from ouschauder.harness import cli
from ouschauder.harness.report import EstimateReport

from conftest import SMALL_CONFIG


@pytest.fixture
def small_cfg_file(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL_CONFIG)
    return p


def run_module(*args):
    return subprocess.run([sys.executable, "-m", "ouschauder", *args], capture_output=True, text=True)


def test_suite_run_is_byte_identical(small_cfg_file, tmp_path):
    outs = []
    for name in ("a", "b"):
        res = run_module("suite", "degeneracy", "--config", str(small_cfg_file), "--out", str(tmp_path / name),
                         "--format", "both")
        assert res.returncode == 0, res.stderr
        assert "ALL PASS" in res.stdout
        outs.append(tmp_path / name)
    for fname in ("report_degeneracy.json", "report_degeneracy.csv", "report_degeneracy_curves.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
    data = json.loads((outs[0] / "report_degeneracy.json").read_text())
    assert {d["inequality_id"] for d in data} == {"kernel_direction_roughness", "range_direction_gradient",
                                                 "range_direction_quotient"}


def test_failing_record_exits_one(monkeypatch, tmp_path, capsys):
    bad = EstimateReport("resolvent_sup_bound", "x", 2.0, 1.0, 0.0, 0.0, 0.0)
    monkeypatch.setattr(cli, "run_suites", lambda cfg, names: [bad])
    assert cli.main(["verify", "--out", str(tmp_path)]) == 1
    assert "FAILURES PRESENT" in capsys.readouterr().out


def test_empty_report_exits_zero(monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "run_suites", lambda cfg, names: [])
    assert cli.main(["verify", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "report.json").read_text() == "[]\n"


def test_configuration_errors_exit_two(tmp_path, small_cfg_file, capsys):
    assert cli.main(["verify", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL_CONFIG.replace("seed = 3", "seed = 3\ncolour = blue"))
    assert cli.main(["suite", "zygmund", "--config", str(bad)]) == 2
    assert cli.main(["solve", "--config", str(small_cfg_file), "--field", "nope", "--x", "0,0,0"]) == 2
    assert cli.main(["solve", "--config", str(small_cfg_file), "--field", "sine", "--x", "0,0"]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_solve_and_constants(small_cfg_file, capsys):
    assert cli.main(["solve", "--config", str(small_cfg_file), "--field", "linear", "--x", "1,0,0",
                     "--operator", "resolvent", "--lam", "1", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["levels"]["value"] == pytest.approx(0.5, abs=1e-10)
    assert cli.main(["solve", "--config", str(small_cfg_file), "--field", "1", "--x", "0.3,0.1,0",
                     "--operator", "mild", "--source", "constant", "--t", "0.5", "--order", "2"]) == 0
    capsys.readouterr()
    assert cli.main(["constants"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert table["zygmund"] == pytest.approx(4.66391, abs=5e-6)
    assert cli.main(["constants", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("c0,c1,interpolation,k_p")


def test_bad_subcommand_is_usage_error():
    res = run_module("suite", "bogus")
    assert res.returncode == 2 and "invalid choice" in res.stderr
