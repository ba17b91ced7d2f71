"""Built-in initial-condition families."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .equilibrium import BEParams, MBParams, Statistics, be_eval, global_equilibrium, equilibrium_state, mb_eval
from .quadrature import DistributionState, RadialGrid, moment_match, moments

FAMILIES = ("juttner", "gamma_shell", "be_juttner", "perturbed", "table")

# Defaults per family; any key not listed here is rejected by the config parser.
FAMILY_DEFAULTS = {
    "juttner": {"rho": 8.0 * math.pi, "T": 1.0},
    "gamma_shell": {"k": 1.0, "a": 1.0},
    "be_juttner": {"c": 1.0, "gamma": 1.0},
    "perturbed": {"epsilon": 0.5, "center": 2.0, "width": 0.5},
    "table": {"path": ""},
}


def j0_state(grid: RadialGrid, stats) -> DistributionState:
    return equilibrium_state(grid, global_equilibrium(stats))


def gamma_shell(k: float, a: float):
    if not (k >= 0 and a > 0):
        raise ValueError(f"gamma_shell needs k >= 0 and a > 0, got k={k!r}, a={a!r}")
    return lambda r: r**k * np.exp(-a * r)


def perturbed_profile(stats, epsilon: float, center: float, width: float):
    """J0 times ``1 + epsilon * exp(-(r - center)^2 / (2 width^2))``."""
    if not (epsilon > -1 and width > 0):
        raise ValueError("perturbed needs epsilon > -1 and width > 0")
    params = global_equilibrium(stats)
    base = mb_eval if isinstance(params, MBParams) else be_eval

    def profile(r):
        bump = np.exp(-((r - center) ** 2) / (2.0 * width**2))
        return base(params, r) * (1.0 + epsilon * bump)

    return profile


def read_table(grid: RadialGrid, path) -> DistributionState:
    """Load ``r,F`` samples; the r column must reproduce the grid nodes."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or not {"r", "F"} <= set(rows[0]):
        raise ValueError(f"{path}: expected a CSV with columns r,F")
    r = np.array([float(row["r"]) for row in rows])
    f = np.array([float(row["F"]) for row in rows])
    if r.shape != grid.nodes.shape or not np.allclose(r, grid.nodes, rtol=1e-12, atol=0):
        raise ValueError(f"{path}: r column does not match the configured grid nodes")
    return DistributionState(grid, f)


def write_table(path, r, values, column="F"):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", column])
        for ri, fi in zip(r, values):
            writer.writerow([format(ri, ".17g"), format(fi, ".17g")])


def initial_state(grid: RadialGrid, family: str, params: dict, stats) -> DistributionState:
    """Sample the named family on the grid.

    ``gamma_shell`` and ``perturbed`` are moment-matched to J0 of the given
    statistics; ``juttner``, ``be_juttner`` and ``table`` are taken as is.
    """
    stats = Statistics(stats)
    p = {**FAMILY_DEFAULTS[family], **params}
    if family == "juttner":
        return equilibrium_state(grid, MBParams(rho=p["rho"], T=p["T"]))
    if family == "be_juttner":
        return equilibrium_state(grid, BEParams(c=p["c"], gamma=p["gamma"]))
    if family == "table":
        return read_table(grid, Path(p["path"]))
    target = moments(j0_state(grid, stats))
    if family == "gamma_shell":
        return moment_match(grid, gamma_shell(p["k"], p["a"]), target)
    if family == "perturbed":
        profile = perturbed_profile(stats, p["epsilon"], p["center"], p["width"])
        return moment_match(grid, profile, target)
    raise ValueError(f"unknown initial-condition family {family!r}")
