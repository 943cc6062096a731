import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from tdhfbench.runner import ConfigError, load_config, parse_config, run_scenario
from tdhfbench.runner.cli import main
from tdhfbench.runner.output import fmt

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_SIM = """
scenario = "simulate"
N = 2
[model]
d = 4
lambda = 0.3
[time]
t_max = 0.1
dt = 1e-3
stride = 25
[initial]
kind = "perturbed"
angle = 0.2
"""


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_shipped_configs_parse():
    for path in sorted(CONFIGS.glob("*.toml")):
        cfg = load_config(path)
        assert cfg.scenario in ("simulate", "audit", "fdll-check", "bounds")


@pytest.mark.parametrize(
    "raw",
    [
        {"scenario": "simulate"},
        {"scenario": "nope"},
        {"scenario": "audit", "extra": 1},
        {"scenario": "simulate", "model": {"d": 4}},
        {"scenario": "simulate", "model": {"lambda": 0.1, "colour": "red"}},
        {"scenario": "simulate", "model": {"lambda": 0.1}, "time": {"t_max": 1.0, "dt": 0.3}},
        {"scenario": "simulate", "model": {"lambda": 0.1}, "weight": {"theta": 0.0}},
        {"scenario": "simulate", "model": {"lambda": 0.1}, "weight": {"values": [0, 2, 1]}},
        {"scenario": "simulate", "model": {"lambda": 0.1}, "initial": {"kind": "random"}},
        {"scenario": "bounds", "bounds": {"lambda": []}},
        {"scenario": "audit", "audit": {"instances": 2.5}},
    ],
)
def test_invalid_configs(raw):
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_lambda_alias_and_overrides():
    cfg = parse_config({"scenario": "bounds", "bounds": {"lambda": [0.0, 0.5]}, "seed": 3})
    assert cfg.bounds.lam == (0.0, 0.5)
    cfg2 = cfg.with_overrides(seed=9, out="elsewhere")
    assert (cfg2.seed, cfg2.out, cfg.seed) == (9, "elsewhere", 3)


def test_simulate_small_run(tmp_path):
    cfg = load_config(_write(tmp_path, SMALL_SIM))
    res = run_scenario(cfg)
    assert res.passed, res.failures
    header, rows = res.tables["records"]
    assert len(rows) == 5 and rows[-1][0] == pytest.approx(0.1)
    assert res.summary["propagator"] == "dense"


def test_preset_sets_coupling(tmp_path):
    text = SMALL_SIM.replace("lambda = 0.3", 'preset = "inverse-N"')
    cfg = load_config(_write(tmp_path, text))
    res = run_scenario(cfg)
    assert res.summary["lambda"] == pytest.approx(0.5)


def test_cli_outputs(tmp_path, capsys):
    path = _write(tmp_path, SMALL_SIM)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(path), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "PASS" in printed and "FAIL" not in printed
    with (out / "records.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "S_g", "dSdt_fd", "T1", "T2", "T3", "trace_dist", "hs_dist", "K_hf", "E_hf",
                       "E_exact", "bound_main_rhs", "bound_S_rhs", "momentum_drift"]
    assert len(rows) == 6
    summary = json.loads((out / "summary.json").read_text())
    assert summary["passed"] and summary["config"]["model"]["lam"] == 0.3
    data = (out / "data" / "S_g.dat").read_text().splitlines()
    assert data[0].startswith("#") and len(data) == 6


def test_cli_failure_exit_code(tmp_path, capsys):
    # an impossible tolerance must make the run fail with exit code 1
    path = _write(tmp_path, SMALL_SIM + "[checks]\ngronwall = 1e-30\n")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")]) == 1
    assert "Groenwall" in capsys.readouterr().err


def test_cli_config_errors(tmp_path):
    assert main(["simulate"]) == 2
    bad = _write(tmp_path, 'scenario = "audit"\nwho = 1\n')
    assert main(["audit", "--config", str(bad)]) == 2
    assert main(["bounds", "--config", str(bad)]) == 2
    huge = _write(tmp_path, SMALL_SIM.replace("d = 4", "d = 30").replace("N = 2", "N = 15"), "huge.toml")
    assert main(["simulate", "--config", str(huge), "--out", str(tmp_path / "h")]) == 2


def test_audit_independent_of_workers(tmp_path):
    text = 'scenario = "audit"\nseed = 5\n[audit]\ninstances = 6\ncommutation_instances = 2\n'
    cfg = load_config(_write(tmp_path, text))
    one = run_scenario(cfg, workers=1)
    two = run_scenario(cfg, workers=2)
    assert one.tables == two.tables
    other = run_scenario(cfg.with_overrides(seed=6))
    assert other.tables["audit"] != one.tables["audit"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "tdhfbench", "bounds", "--out", str(tmp_path / "b")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "b" / "bounds.csv").exists()


def test_number_format():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3" and fmt(True) == "1" and fmt("x") == "x"
    assert fmt(float("inf")) == "inf"


def test_potential_params_reach_the_kernel(tmp_path):
    import numpy as np

    from tdhfbench.model import build_lattice_model
    from tdhfbench.runner.scenarios import build_model

    text = SMALL_SIM.replace(
        "lambda = 0.3", 'lambda = 0.3\npotential = {kind = "yukawa", sign = -1, params = {screening = 2.0}}')
    m = build_model(load_config(_write(tmp_path, text)))
    ref = build_lattice_model(4, potential={"kind": "yukawa", "sign": -1, "screening": 2.0}, lam=0.3)
    assert np.allclose(m.kernel, ref.kernel)
    assert not np.allclose(m.kernel, build_lattice_model(4, potential="yukawa").kernel * -1)
    with pytest.raises(ConfigError):
        parse_config({"scenario": "simulate",
                      "model": {"lambda": 0.1, "potential": {"kind": "yukawa", "params": {"x": 1}}}})
