"""Command-line interface behavior and exit codes."""

import json

import pytest

from rydcz import cli


def run(argv):
    return cli.main(argv)


def test_unknown_scenario_exit_code(tmp_path, capsys):
    code = run(["simulate", "--scenario", "nope", "--output", str(tmp_path)])
    assert code == cli.EXIT_USAGE
    assert "unknown scenario" in capsys.readouterr().err


def test_simulate_single_atom_demo(tmp_path):
    code = run(["simulate", "--scenario", "FIG2-a", "--output", str(tmp_path)])
    assert code == cli.EXIT_OK
    payload = json.loads((tmp_path / "FIG2-a-simulate.json").read_text())
    assert payload["acceleration_ratio"] == pytest.approx(0.104, abs=0.005)
    assert payload["reference_period_us"] == pytest.approx(0.4)


def test_simulate_gate_writes_result_and_trajectories(tmp_path):
    code = run(["simulate", "--scenario", "LIM-ASA", "--steps", "8000",
                "--trajectories", "--output", str(tmp_path)])
    assert code == cli.EXIT_OK
    payload = json.loads((tmp_path / "LIM-ASA-simulate.json").read_text())
    assert 0.0 <= payload["result"]["fidelity_ideal"] <= 1.0
    csv_11 = (tmp_path / "LIM-ASA-11-populations.csv").read_text().splitlines()
    assert csv_11[0].split(",")[0] == "t_us"
    assert len(csv_11) > 100


def test_budget_requires_asa(tmp_path, capsys):
    code = run(["budget", "--scenario", "I-SA", "--output", str(tmp_path)])
    assert code == cli.EXIT_USAGE
    assert "ancillary" in capsys.readouterr().err


def test_budget_rate_parsing():
    assert cli._parse_rate_khz("100kHz") == pytest.approx(0.1)
    assert cli._parse_rate_khz("50") == pytest.approx(0.05)
    with pytest.raises(cli.UsageError):
        cli._parse_rate_khz("fast")


def test_optimize_single_atom_rejected(tmp_path, capsys):
    code = run(["optimize", "--scenario", "FIG2-a", "--output", str(tmp_path)])
    assert code == cli.EXIT_USAGE


def test_optimize_missing_config(tmp_path, capsys):
    code = run(["optimize", "--scenario", "LIM-ASA",
                "--config", str(tmp_path / "missing.json"),
                "--output", str(tmp_path)])
    assert code == cli.EXIT_USAGE
    assert "cannot read config" in capsys.readouterr().err


def test_optimize_tiny_run_deterministic(tmp_path):
    args = ["optimize", "--scenario", "LIM-ASA", "--seed", "4",
            "--population", "6", "--generations", "1", "--output", str(tmp_path)]
    assert run(args) == cli.EXIT_OK
    first = json.loads((tmp_path / "LIM-ASA-optimize.json").read_text())
    assert run(args) == cli.EXIT_OK
    second = json.loads((tmp_path / "LIM-ASA-optimize.json").read_text())
    first.pop("wall_time")
    second.pop("wall_time")
    assert first == second


def test_optimize_batch_outputs(tmp_path):
    code = run(["optimize", "--scenario", "LIM-ASA", "--runs", "2", "--seed", "6",
                "--population", "6", "--generations", "1", "--output", str(tmp_path)])
    assert code == cli.EXIT_OK
    rows = (tmp_path / "LIM-ASA-optimize-runs.csv").read_text().splitlines()
    assert rows[0] == "run,best_F"
    assert len(rows) == 3


def test_reproduce_unknown_target(capsys):
    code = run(["reproduce", "bogus"])
    assert code == cli.EXIT_USAGE
    assert "unknown target" in capsys.readouterr().err


def test_reproduce_fig2_prints_table(capsys):
    code = run(["reproduce", "fig2"])
    out = capsys.readouterr().out
    assert "FIG2-a p" in out
    assert code in (cli.EXIT_OK, cli.EXIT_CHECK_FAILED)
