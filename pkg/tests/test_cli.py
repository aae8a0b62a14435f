import json
from pathlib import Path

import pytest

from futgame import __version__
from futgame.cli import main
from helpers import SCENARIO_A

ROOT = Path(__file__).resolve().parents[1]
A = str(ROOT / "scenarios" / "scenario_a.json")
B = str(ROOT / "scenarios" / "scenario_b.json")


def test_solve_dp(capsys, tmp_path):
    out = tmp_path / "a.json"
    assert main(["solve-dp", "--scenario", A, "--agent", "0", "--out", str(out)]) == 0
    assert "terminal wealth 48" in capsys.readouterr().out
    assert json.loads(out.read_text())["terminal"]["wealth"] == [48]


def test_solve_game(capsys, tmp_path):
    out = tmp_path / "b.csv"
    assert main(["solve-game", "--scenario", B, "--out", str(out), "--format", "tabular"]) == 0
    assert "(39, 39)" in capsys.readouterr().out
    assert len(out.read_text().splitlines()) == 5


def test_enumerate(capsys):
    assert main(["enumerate", "--scenario", B]) == 0
    out = capsys.readouterr().out
    assert "ideal point (39, 39)" in out


@pytest.mark.parametrize("mode", ["per-step", "normal-form"])
def test_verify(mode, capsys):
    assert main(["verify", "--scenario", A, "--mode", mode]) == 0
    assert main(["verify", "--scenario", B, "--mode", mode]) == 0


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["solve-dp"])
    assert exc.value.code == 2


def test_validation_error(tmp_path):
    bad = dict(SCENARIO_A, horizon_f=1)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    assert main(["solve-dp", "--scenario", str(p)]) == 3
    assert main(["solve-game", "--scenario", str(tmp_path / "missing.json")]) == 3


def test_infeasible(tmp_path):
    doc = dict(SCENARIO_A, agents=[{"id": 0, "initial_capital": 5}])
    p = tmp_path / "poor.json"
    p.write_text(json.dumps(doc))
    assert main(["solve-dp", "--scenario", str(p)]) == 4
    assert main(["solve-game", "--scenario", str(p)]) == 4


def test_verify_mismatch_exit_code(tmp_path, capsys):
    # backward selection and whole-sequence selection pick differently here
    p = ROOT / "tests" / "data" / "modes_disagree.json"
    assert main(["verify", "--scenario", str(p), "--mode", "normal-form"]) == 1
    assert "MISMATCH" in capsys.readouterr().out
    assert main(["verify", "--scenario", str(p), "--mode", "per-step"]) == 0
