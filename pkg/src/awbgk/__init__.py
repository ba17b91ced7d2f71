"""Relaxation-time (Anderson-Witting) kinetics of massless particles in a
radiation-dominated FLRW background, for Maxwell-Boltzmann and
Bose-Einstein statistics."""

from .cosmology import ScaleFactor, physical_moments
from .dynamics import SolverConfig, analytic_solution, conservation_report, picard_iterate, simulate, step
from .equilibrium import (
    AperyRangeError,
    BEParams,
    MBParams,
    Statistics,
    beta,
    beta_limit_zero,
    build_equilibrium,
    solve_c,
)
from .quadrature import DistributionState, MomentPair, build_grid, default_grid, moment_match, moments

__all__ = [
    "AperyRangeError",
    "BEParams",
    "DistributionState",
    "MBParams",
    "MomentPair",
    "ScaleFactor",
    "SolverConfig",
    "Statistics",
    "analytic_solution",
    "beta",
    "beta_limit_zero",
    "build_equilibrium",
    "build_grid",
    "conservation_report",
    "default_grid",
    "moment_match",
    "moments",
    "physical_moments",
    "picard_iterate",
    "simulate",
    "solve_c",
    "step",
]
