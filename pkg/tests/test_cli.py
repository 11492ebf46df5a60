"""Command-line interface: outputs, config precedence, exit codes."""

import json
import math
import subprocess
import sys

import pytest

import aosisched.cli as cli
from aosisched import NotThreshold, objective_F
from conftest import SV

SV_FLAGS = ["--r0", "0.1", "--r1", "0.9", "--rho", "0.1",
            "--p", "0.5", "--q", "0.9", "--lambda1", "1", "--lambda2", "2"]


def run_cli(args):
    return cli.main(args)


def parse_kv(captured: str) -> dict:
    out = {}
    for line in captured.splitlines():
        if " = " in line:
            key, val = line.split(" = ", 1)
            out[key] = val
    return out


def test_solve_prints_solution(capsys):
    assert run_cli(["solve", *SV_FLAGS]) == 0
    kv = parse_kv(capsys.readouterr().out)
    assert kv["monotone"] == "true"
    assert float(kv["theta"]) == pytest.approx(6.0557780947, abs=1e-9)
    assert int(kv["n1"]) <= int(kv["n2"])


def test_solve_writes_artifacts(tmp_path, capsys):
    assert run_cli(["solve", *SV_FLAGS, "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    blob = json.loads((tmp_path / "solve.json").read_text())
    assert blob["monotone"] is True
    lines = (tmp_path / "value_function.csv").read_text().splitlines()
    assert lines[0] == "s,V,action"
    assert lines[1].startswith("0,0,")
    assert len(lines) == 1 + 2001  # states 0..s_max


def test_evaluate_matches_library(capsys):
    assert run_cli(["evaluate", *SV_FLAGS, "--n1", "3", "--n2", "4"]) == 0
    kv = parse_kv(capsys.readouterr().out)
    want = objective_F(cli.ModelParams(**SV), (3, 4))
    assert float(kv["objective"]) == pytest.approx(want, abs=1e-9)
    assert run_cli(["evaluate", *SV_FLAGS, "--n1", "2", "--n2", "inf"]) == 0
    kv = parse_kv(capsys.readouterr().out)
    assert kv["n2"] == "inf"
    assert float(kv["frac_uncompressed"]) == 0.0


def test_optimize_command(tmp_path, capsys):
    assert run_cli(["optimize", *SV_FLAGS, "--out", str(tmp_path)]) == 0
    kv = parse_kv(capsys.readouterr().out)
    assert kv["method"] == "exhaustive"
    lines = (tmp_path / "f_grid.csv").read_text().splitlines()
    assert lines[0] == "n1,n2,F"
    assert any(line.startswith("inf,inf,") for line in lines)
    assert run_cli(["optimize", *SV_FLAGS, "--method", "descent"]) == 0
    kv2 = parse_kv(capsys.readouterr().out)
    assert kv2["F_star"] == kv["F_star"]


def test_simulate_command(tmp_path, capsys):
    code = run_cli(["simulate", *SV_FLAGS, "--n1", "3", "--n2", "4",
                    "--horizon", "100000", "--seed", "9",
                    "--out", str(tmp_path)])
    assert code == 0
    kv = parse_kv(capsys.readouterr().out)
    blob = json.loads((tmp_path / "simulate.json").read_text())
    assert float(kv["avg_cost"]) == pytest.approx(blob["avg_cost"], rel=1e-10)
    assert blob["seed"] == 9


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "params.json"
    cfg.write_text(json.dumps({**SV, "seed": 5, "horizon": 50_000}))
    assert run_cli(["evaluate", "--params", str(cfg),
                    "--n1", "0", "--n2", "2"]) == 0
    base = parse_kv(capsys.readouterr().out)
    # a flag overrides the same setting in the file
    assert run_cli(["evaluate", "--params", str(cfg), "--lambda2", "7",
                    "--n1", "0", "--n2", "2"]) == 0
    bumped = parse_kv(capsys.readouterr().out)
    assert float(bumped["objective"]) > float(base["objective"])
    # the file's simulation settings apply when flags are absent
    assert run_cli(["simulate", "--params", str(cfg),
                    "--n1", "3", "--n2", "4"]) == 0
    kv = parse_kv(capsys.readouterr().out)
    assert kv["avg_cost"]  # ran with horizon/seed from the file


def test_exit_code_invalid_params(capsys):
    assert run_cli(["solve", "--r0", "0.1", "--r1", "0.3", "--rho", "0.1",
                    "--p", "0.5", "--q", "0.9",
                    "--lambda1", "1", "--lambda2", "2"]) == 2
    assert "r0 + r1" in capsys.readouterr().err
    assert run_cli(["solve", "--r0", "0.1"]) == 2
    assert "missing parameters" in capsys.readouterr().err


def test_exit_code_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run_cli(["solve", "--params", str(bad)]) == 2
    assert run_cli(["solve", "--params", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_exit_code_no_convergence(capsys):
    assert run_cli(["solve", *SV_FLAGS, "--max-iter", "2"]) == 3
    assert "after 2 iterations" in capsys.readouterr().err


def test_exit_code_structure_violation(monkeypatch, capsys):
    def broken(result):
        raise NotThreshold(5)

    monkeypatch.setattr(cli, "extract_thresholds", broken)
    assert run_cli(["solve", *SV_FLAGS]) == 4
    assert "state 5" in capsys.readouterr().err


def test_verify_exit_codes(capsys):
    args = ["verify", *SV_FLAGS, "--horizon", "100000", "--seed", "17"]
    assert run_cli(args) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert run_cli([*args, "--f-mode", "paper-literal"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is False


def test_sweep_command(tmp_path, capsys):
    out = tmp_path / "sweep"
    code = run_cli(["sweep", "--r0", "0.1", "--r1", "0.9", "--rho", "0.1",
                    "--p", "0.5", "--q", "0.9",
                    "--lambda1-grid", "0,1", "--lambda2-grid", "0,1",
                    "--jobs", "2", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "cells = 4" in text and "failures = 0" in text
    lines = (out / "cost_grid.csv").read_text().splitlines()
    assert len(lines) == 5


def test_threshold_flag_parsing():
    with pytest.raises(SystemExit):
        cli.create_parser().parse_args(["evaluate", "--n1", "-3", "--n2", "4"])
    with pytest.raises(SystemExit):
        cli.create_parser().parse_args(["evaluate", "--n1", "x", "--n2", "4"])
    args = cli.create_parser().parse_args(["evaluate", "--n1", "2", "--n2", "inf"])
    assert args.n1 == 2 and args.n2 == math.inf


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "aosisched", "evaluate", *SV_FLAGS,
         "--n1", "3", "--n2", "4"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "objective = " in proc.stdout


def test_sweep_byte_identical_across_processes(tmp_path):
    cmd = [sys.executable, "-m", "aosisched", "sweep",
           "--r0", "0.1", "--r1", "0.9", "--rho", "0.1",
           "--p", "0.5", "--q", "0.9",
           "--lambda1-grid", "0,1", "--lambda2-grid", "0,2"]
    for sub in ("x", "y"):
        proc = subprocess.run([*cmd, "--out", str(tmp_path / sub)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    for name in ("cost_grid.csv", "fractions.csv", "policy_grid.csv",
                 "cost_grid.svg", "fractions.svg"):
        assert ((tmp_path / "x" / name).read_bytes()
                == (tmp_path / "y" / name).read_bytes())
