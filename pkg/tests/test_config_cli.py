import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from awbgk.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_MATH, EXIT_OK, main, timeseries_columns
from awbgk.config import ConfigError, RunConfig, load_config, loads, parse_config
from awbgk.equilibrium import Statistics
from awbgk.initial import initial_state, write_table
from awbgk.quadrature import build_grid

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = """
statistics = "be"
[initial]
family = "gamma_shell"
k = 1.0
a = 1.0
[solver]
dt = 0.05
t_end = 1.0
[output]
dir = "out"
"""


@pytest.fixture
def out_root(tmp_path, monkeypatch):
    monkeypatch.setenv("AWBGK_OUTPUT_ROOT", str(tmp_path))
    return tmp_path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


# -- config ---------------------------------------------------------------------

def test_defaults():
    cfg = parse_config({})
    assert cfg == RunConfig()
    assert cfg.solver_config().statistics is Statistics.MAXWELL_BOLTZMANN


def test_round_trip():
    cfg = loads(MINIMAL)
    assert loads(cfg.dumps()) == cfg


@settings(max_examples=40)
@given(stats=st.sampled_from(["mb", "be"]), stepper=st.sampled_from(["exact", "rk4"]),
       dt=st.floats(1e-3, 0.5), span=st.floats(1.1, 100.0), n=st.integers(4, 128),
       eps=st.floats(-0.9, 5.0))
def test_round_trip_property(stats, stepper, dt, span, n, eps):
    raw = {
        "statistics": stats,
        "initial": {"family": "perturbed", "epsilon": eps},
        "grid": {"rule": "laguerre", "n_nodes": n},
        "solver": {"stepper": stepper, "dt": dt, "t_end": dt * span},
    }
    cfg = parse_config(raw)
    assert loads(cfg.dumps()) == cfg


@pytest.mark.parametrize("text", [
    "statistics = 'fd'",
    "bogus = 1",
    "[initial]\nfamily = 'delta'",
    "[initial]\nfamily = 'gamma_shell'\nsigma = 2.0",
    "[initial]\nfamily = 'table'\npath = 'missing.csv'",
    "[initial]\nfamily = 'gamma_shell'\nk = 'one'",
    "[grid]\nrule = 'simpson'",
    "[grid]\nn_nodes = 10.5",
    "[grid]\nn_nodes = 2",
    "[grid]\nrule = 'uniform'\nn_nodes = 400",
    "[grid]\nrule = 'laguerre'\nr_max = 40.0",
    "[solver]\nstepper = 'euler'",
    "[solver]\ndt = -0.01",
    "[solver]\ndt = 0.5\nt_end = 0.1",
    "[solver]\ndt = true",
    "[solver]\ntheta = 0.5",
    "[tolerances]\nseries_abs_tol = 1e-20",
    "[output]\ndir = ''",
    "solver = 3",
    "[solver\n",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        loads(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml")


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.toml")), ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert loads(cfg.dumps()) == cfg


def test_output_dir_resolution(out_root):
    assert loads(MINIMAL).output_dir() == out_root / "out"
    assert loads("[output]\ndir = '/abs/x'").output_dir() == Path("/abs/x")


def test_table_path_resolves_against_config_dir(tmp_path):
    grid = build_grid("laguerre", 16)
    write_table(tmp_path / "f0.csv", grid.nodes, np.exp(-grid.nodes))
    (tmp_path / "run.toml").write_text(
        "[initial]\nfamily = 'table'\npath = 'f0.csv'\n[grid]\nn_nodes = 16\n")
    cfg = load_config(tmp_path / "run.toml")
    assert Path(cfg.initial.params["path"]).is_absolute()
    state = initial_state(cfg.grid.build(), cfg.initial.family, cfg.initial.params, "mb")
    np.testing.assert_array_equal(state.values, np.exp(-grid.nodes))


def test_table_on_wrong_grid_is_rejected(tmp_path):
    grid = build_grid("laguerre", 16)
    write_table(tmp_path / "f0.csv", grid.nodes, np.exp(-grid.nodes))
    with pytest.raises(ValueError):
        initial_state(build_grid("laguerre", 32), "table", {"path": str(tmp_path / "f0.csv")}, "mb")


# -- cli --------------------------------------------------------------------------

def test_timeseries_columns():
    assert timeseries_columns(Statistics.MAXWELL_BOLTZMANN, False) == ["t", "rho", "energy", "T"]
    assert timeseries_columns(Statistics.BOSE_EINSTEIN, True) == [
        "t", "rho", "energy", "T", "c", "gamma", "linf_vs_analytic"]


def test_simulate_writes_outputs(out_root, tmp_path, capsys):
    cfg = tmp_path / "be.toml"
    cfg.write_text(MINIMAL)
    assert main(["simulate", str(cfg)]) == EXIT_OK
    out = out_root / "out"
    header, rows = read_csv(out / "timeseries.csv")
    assert header == ["t", "rho", "energy", "T", "c", "gamma", "linf_vs_analytic"]
    assert len(rows) == 21
    assert float(rows[-1][0]) == pytest.approx(1.0)
    # every cell is written as its 17-significant-digit rendering
    for row in rows:
        for cell in row:
            assert cell == format(float(cell), ".17g")
    assert any(len(cell.lstrip("-").replace(".", "").split("e")[0]) == 17 for cell in rows[7])
    assert all(abs(float(r[4]) - 1.0) <= 1e-8 for r in rows)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["matched"] is True
    assert summary["failure"] is None
    assert summary["max_analytic_deviation"] <= 1e-10
    assert loads((out / "config.toml").read_text()) == loads(MINIMAL)
    assert json.loads(capsys.readouterr().out)["n_states"] == 21


def test_simulate_out_override(out_root, tmp_path):
    cfg = tmp_path / "be.toml"
    cfg.write_text(MINIMAL)
    assert main(["simulate", str(cfg), "--out", "elsewhere"]) == EXIT_OK
    assert (out_root / "elsewhere" / "summary.json").is_file()


def test_simulate_unmatched_has_no_deviation_column(out_root, tmp_path):
    cfg = tmp_path / "mb.toml"
    cfg.write_text("[initial]\nfamily = 'juttner'\nrho = 3.0\nT = 2.0\n"
                   "[solver]\ndt = 0.1\nt_end = 1.0\n[output]\ndir = 'u'\n")
    assert main(["simulate", str(cfg)]) == EXIT_OK
    header, rows = read_csv(out_root / "u" / "timeseries.csv")
    assert header == ["t", "rho", "energy", "T"]
    assert float(rows[-1][3]) == pytest.approx(2.0, rel=1e-13)


def test_simulate_apery_violation_exits_3(out_root, tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("statistics = 'be'\n[initial]\nfamily = 'juttner'\nrho = 100.0\nT = 1.0\n"
                   "[solver]\ndt = 0.1\nt_end = 1.0\n[output]\ndir = 'bad'\n")
    assert main(["simulate", str(cfg)]) == EXIT_MATH
    assert "rho/(3T)^3" in capsys.readouterr().err
    summary = json.loads((out_root / "bad" / "summary.json").read_text())
    assert summary["n_states"] == 0 and summary["failure"]


def test_simulate_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "broken.toml"
    cfg.write_text("[solver\n")
    assert main(["simulate", str(cfg)]) == EXIT_CONFIG
    assert "malformed TOML" in capsys.readouterr().err
    assert main(["simulate", str(tmp_path / "absent.toml")]) == EXIT_CONFIG


def test_equilibrium_from_moments(out_root, capsys):
    code = main(["equilibrium", "--rho", str(8 * math.pi), "--energy", str(24 * math.pi),
                 "--stats", "mb", "--out", "j.csv"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    t_line = next(line for line in out.splitlines() if line.startswith("T "))
    assert float(t_line.split("=")[1]) == pytest.approx(1.0, rel=1e-15)
    header, rows = read_csv(out_root / "j.csv")
    assert header == ["r", "J"]
    assert len(rows) == 64
    r, j = float(rows[0][0]), float(rows[0][1])
    assert j == pytest.approx(math.exp(-r), rel=1e-14)


def test_equilibrium_be_from_table(out_root, tmp_path, capsys):
    grid = build_grid("laguerre", 64)
    write_table(tmp_path / "f.csv", grid.nodes, 1 / np.expm1(1 + grid.nodes))
    assert main(["equilibrium", "--table", str(tmp_path / "f.csv"), "--stats", "be"]) == EXIT_OK
    out = capsys.readouterr().out
    assert ": ok" in out
    c_line = next(line for line in out.splitlines() if line.startswith("J: c ="))
    c = float(c_line.split("=")[1].split(",")[0])
    assert c == pytest.approx(1.0, abs=1e-10)
    assert (out_root / "equilibrium.csv").is_file()


def test_equilibrium_apery_violation(out_root, capsys):
    code = main(["equilibrium", "--rho", "100", "--energy", "300", "--stats", "be"])
    assert code == EXIT_MATH
    captured = capsys.readouterr()
    assert "VIOLATED" in captured.out
    assert "1.5328697679828" in captured.err


def test_equilibrium_needs_moments(out_root):
    assert main(["equilibrium", "--rho", "1.0", "--stats", "mb"]) == EXIT_CONFIG
    assert main(["equilibrium", "--rho", "-1.0", "--energy", "3.0", "--stats", "mb"]) == EXIT_CONFIG


def test_verify_passes(capsys):
    assert main(["verify"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 9


def test_verify_on_coarse_grid_fails_by_name(capsys):
    assert main(["verify", "--n-nodes", "6"]) == EXIT_FAIL
    out = capsys.readouterr().out
    assert "[FAIL] 8 matching conditions" in out
    assert "[PASS] 4 monotone inversion" in out
    assert "check(s) failed:" in out


def test_sweep(out_root, tmp_path, capsys):
    sweep_dir = tmp_path / "sweep"
    sweep_dir.mkdir()
    for name, stats in (("a", "mb"), ("b", "be")):
        (sweep_dir / f"{name}.toml").write_text(
            f"statistics = '{stats}'\n[solver]\ndt = 0.1\nt_end = 1.0\n[output]\ndir = 'sw_{name}'\n")
    assert main(["sweep", str(sweep_dir), "--jobs", "2"]) == EXIT_OK
    assert (out_root / "sw_a" / "summary.json").is_file()
    assert (out_root / "sw_b" / "summary.json").is_file()
    (sweep_dir / "c.toml").write_text("[solver]\ndt = -1.0\n")
    assert main(["sweep", str(sweep_dir), "--jobs", "2"]) == EXIT_CONFIG
    assert "c.toml" in capsys.readouterr().out


def test_sweep_empty_dir(tmp_path):
    assert main(["sweep", str(tmp_path)]) == EXIT_CONFIG


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
