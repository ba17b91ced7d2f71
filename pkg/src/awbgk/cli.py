"""Command-line entry point.

    awbgk simulate CONFIG
    awbgk equilibrium --rho R --energy E --stats {mb,be}
    awbgk equilibrium --table FILE --stats {mb,be}
    awbgk verify
    awbgk sweep DIR

Exit codes: 0 success, 1 failed verification, 2 bad configuration or
arguments, 3 numerical failure (for example the Bose-Einstein range
condition).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import acceptance
from .config import OUTPUT_ROOT_ENV, ConfigError, RunConfig, load_config
from .dynamics import conservation_report, simulate
from .equilibrium import (
    AperyRangeError,
    BEParams,
    Statistics,
    apery_ratio,
    beta_limit_zero,
    build_equilibrium,
    evaluate,
)
from .initial import initial_state, read_table, write_table
from .quadrature import MomentPair, build_grid, moments, temperature

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MATH = 0, 1, 2, 3


def _fmt(x) -> str:
    return format(float(x), ".17g")


def timeseries_columns(stats: Statistics, matched: bool) -> list[str]:
    cols = ["t", "rho", "energy", "T"]
    if stats is Statistics.BOSE_EINSTEIN:
        cols += ["c", "gamma"]
    if matched:
        cols.append("linf_vs_analytic")
    return cols


def write_timeseries(path: Path, traj) -> None:
    cols = timeseries_columns(traj.statistics, traj.matched)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for d in traj.diagnostics:
            row = [d.t, d.moments.rho, d.moments.energy, temperature(d.moments)]
            if isinstance(d.params, BEParams):
                row += [d.params.c, d.params.gamma]
            if traj.matched:
                row.append(d.linf_vs_analytic)
            writer.writerow([_fmt(x) for x in row])


def run_simulation(config: RunConfig) -> tuple[int, dict]:
    """Run one configured simulation and write its outputs."""
    out = config.output_dir()
    out.mkdir(parents=True, exist_ok=True)
    grid = config.grid.build()
    solver = config.solver_config()
    try:
        F0 = initial_state(grid, config.initial.family, config.initial.params, config.statistics)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"initial condition: {exc}") from exc

    start = time.perf_counter()
    traj = simulate(F0, solver)
    wall = time.perf_counter() - start

    write_timeseries(out / "timeseries.csv", traj)
    (out / "config.toml").write_text(config.dumps())
    report = conservation_report(traj) if traj.states else None
    summary = {
        "statistics": solver.statistics.value,
        "stepper": solver.stepper.value,
        "matched": traj.matched,
        "n_states": len(traj.states),
        "t_final": traj.states[-1].time if traj.states else None,
        "max_rho_drift": report.max_rho_drift if report else None,
        "max_energy_drift": report.max_energy_drift if report else None,
        "max_drift": report.max_drift if report else None,
        "max_analytic_deviation": traj.max_analytic_deviation(),
        "wall_time_s": wall,
        "failure": traj.failure,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return (EXIT_MATH if traj.failure else EXIT_OK), summary


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    if args.out:
        config = replace(config, output=replace(config.output, dir=str(args.out)))
    code, summary = run_simulation(config)
    if summary["failure"]:
        print(f"error: {summary['failure']}", file=sys.stderr)
    print(json.dumps(summary, indent=2))
    return code


def cmd_equilibrium(args) -> int:
    stats = Statistics(args.stats)
    grid = build_grid(args.rule, args.n_nodes, args.r_max)
    if args.table:
        m = moments(read_table(grid, args.table))
    else:
        if args.rho is None or args.energy is None:
            raise ConfigError("equilibrium needs --rho and --energy, or --table")
        m = MomentPair(args.rho, args.energy)
    print(f"rho      = {_fmt(m.rho)}")
    print(f"energy   = {_fmt(m.energy)}")
    print(f"T        = {_fmt(temperature(m))}")
    if stats is Statistics.BOSE_EINSTEIN:
        ratio, bound = apery_ratio(m), beta_limit_zero()
        verdict = "ok" if 0 < ratio < bound else "VIOLATED"
        print(f"rho/(3T)^3 = {_fmt(ratio)} vs bound {_fmt(bound)}: {verdict}")
    params = build_equilibrium(m, stats)
    if stats is Statistics.MAXWELL_BOLTZMANN:
        print(f"J: rho = {_fmt(params.rho)}, T = {_fmt(params.T)}")
    else:
        print(f"J: c = {_fmt(params.c)}, gamma = {_fmt(params.gamma)}")
    out = Path(args.out)
    write_table(out, grid.nodes, evaluate(params, grid.nodes), column="J")
    print(f"sampled J written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = build_grid("laguerre", args.n_nodes)
    results = acceptance.run_all(grid)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_FAIL
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def _sweep_one(path: str) -> tuple[str, int, str]:
    try:
        config = load_config(path)
        code, summary = run_simulation(config)
        return path, code, summary["failure"] or "ok"
    except ConfigError as exc:
        return path, EXIT_CONFIG, str(exc)


def cmd_sweep(args) -> int:
    paths = sorted(str(p) for p in Path(args.dir).glob("*.toml"))
    if not paths:
        raise ConfigError(f"no *.toml configs in {args.dir}")
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(_sweep_one, paths))
    for path, code, message in results:
        print(f"{code}  {path}: {message}")
    return max(code for _, code, _ in results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="awbgk",
        description="Relaxation of massless kinetic distributions toward Juttner equilibria in FLRW.",
        epilog=f"Relative output paths resolve under ${OUTPUT_ROOT_ENV} (default: cwd).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one configured simulation")
    p.add_argument("config")
    p.add_argument("--out", help="override [output] dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("equilibrium", help="build J from moments or a sampled table")
    p.add_argument("--rho", type=float)
    p.add_argument("--energy", type=float)
    p.add_argument("--table", help="CSV with columns r,F on the chosen grid")
    p.add_argument("--stats", choices=["mb", "be"], required=True)
    p.add_argument("--rule", choices=["laguerre", "uniform"], default="laguerre")
    p.add_argument("--n-nodes", type=int, default=64)
    p.add_argument("--r-max", type=float)
    p.add_argument("--out", default="equilibrium.csv")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--n-nodes", type=int, default=64, help="Gauss-Laguerre nodes for grid-based checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run every *.toml in DIR concurrently")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "equilibrium" and not Path(args.out).is_absolute():
        args.out = Path(os.environ.get(OUTPUT_ROOT_ENV, ".")) / args.out
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AperyRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
