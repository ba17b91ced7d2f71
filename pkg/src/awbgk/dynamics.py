"""Time integration of ``dF/dt = J(F) - F`` in covariant momentum variables."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import (
    DEFAULT_TOL,
    EquilibriumParams,
    SeriesTolerance,
    Statistics,
    build_equilibrium,
    evaluate,
    global_equilibrium,
)
from .quadrature import DistributionState, MomentPair, moments, moments_of


class Stepper(str, enum.Enum):
    EXACT = "exact"
    RK4 = "rk4"


class MomentMismatchWarning(UserWarning):
    """Initial data and J0 do not share number and energy moments."""


class PicardError(RuntimeError):
    def __init__(self, iterate: int, cause: Exception):
        self.iterate = iterate
        self.cause = cause
        super().__init__(f"Picard iterate {iterate}: {cause}")


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 0.01
    t_end: float = 10.0
    stepper: Stepper = Stepper.EXACT
    statistics: Statistics = Statistics.MAXWELL_BOLTZMANN
    series_tol: SeriesTolerance = DEFAULT_TOL
    # relative tolerance for deciding that F0 shares the moments of J0
    match_rtol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "stepper", Stepper(self.stepper))
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.t_end > self.dt:
            raise ValueError(f"t_end must exceed dt, got t_end={self.t_end!r}, dt={self.dt!r}")
        if self.t_end / self.dt > 1e7:
            raise ValueError("t_end/dt exceeds the 1e7 step budget")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class StepDiagnostics:
    t: float
    moments: MomentPair
    # J(F) built from this state, i.e. the equilibrium driving the next step
    params: EquilibriumParams
    linf_vs_analytic: float | None = None


@dataclass
class Trajectory:
    statistics: Statistics
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    matched: bool = False
    failure: str | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])

    def values(self) -> np.ndarray:
        return np.stack([s.values for s in self.states])

    def max_analytic_deviation(self) -> float | None:
        devs = [d.linf_vs_analytic for d in self.diagnostics if d.linf_vs_analytic is not None]
        return max(devs) if devs else None


def _require_same_grid(a: DistributionState, b: DistributionState):
    if not a.grid.matches(b.grid):
        raise ValueError("states live on different grids")


def moments_agree(a: MomentPair, b: MomentPair, rtol: float) -> bool:
    return math.isclose(a.rho, b.rho, rel_tol=rtol) and math.isclose(a.energy, b.energy, rel_tol=rtol)


def analytic_solution(F0: DistributionState, J0: DistributionState, t: float,
                      rtol: float = 1e-10) -> DistributionState:
    """``exp(-t) F0 + (1 - exp(-t)) J0``.

    This solves the equation only when F0 and J0 share number and energy
    moments; otherwise a :class:`MomentMismatchWarning` is issued and the
    formula is returned anyway.
    """
    _require_same_grid(F0, J0)
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    if not moments_agree(moments(F0), moments(J0), rtol):
        warnings.warn("F0 and J0 do not share moments; formula is not a solution",
                      MomentMismatchWarning, stacklevel=2)
    decay = math.exp(-t)
    return DistributionState(F0.grid, decay * F0.values + (1.0 - decay) * J0.values, F0.time + t)


def _attractor(grid, values, stats, tol):
    params = build_equilibrium(moments_of(grid, values), stats, tol)
    return evaluate(params, grid.nodes), params


def _advance(state: DistributionState, dt: float, stats, tol, stepper: Stepper, params=None):
    grid = state.grid
    f = state.values
    if stepper is Stepper.EXACT:
        if params is None:
            j, _ = _attractor(grid, f, stats, tol)
        else:
            j = evaluate(params, grid.nodes)
        decay = math.exp(-dt)
        new = decay * f + (1.0 - decay) * j
    else:
        def rhs(g):
            return _attractor(grid, g, stats, tol)[0] - g

        k1 = rhs(f)
        k2 = rhs(f + 0.5 * dt * k1)
        k3 = rhs(f + 0.5 * dt * k2)
        k4 = rhs(f + dt * k3)
        new = f + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return DistributionState(grid, new, state.time + dt)


def step(state: DistributionState, dt: float, stats, tol: SeriesTolerance = DEFAULT_TOL,
         stepper=Stepper.EXACT) -> DistributionState:
    """Advance one step, rebuilding J(F) from the current moments.

    The exact stepper treats J as frozen over the step, which is exact
    whenever the moments (hence J) do not change.
    """
    return _advance(state, dt, Statistics(stats), tol, Stepper(stepper))


def simulate(F0: DistributionState, config: SolverConfig) -> Trajectory:
    stats = config.statistics
    grid = F0.grid
    J0 = DistributionState(grid, evaluate(global_equilibrium(stats), grid.nodes))
    matched = moments_agree(moments(F0), moments(J0), config.match_rtol)
    traj = Trajectory(statistics=stats, matched=matched)

    def record(state):
        m = moments(state)
        params = build_equilibrium(m, stats, config.series_tol)
        dev = None
        if matched:
            decay = math.exp(-state.time)
            exact = decay * F0.values + (1.0 - decay) * J0.values
            dev = float(np.max(np.abs(state.values - exact)))
        traj.states.append(state)
        traj.diagnostics.append(StepDiagnostics(state.time, m, params, dev))
        return params

    state = F0.at_time(0.0)
    try:
        params = record(state)
        for k in range(1, config.n_steps + 1):
            state = _advance(state, config.dt, stats, config.series_tol, config.stepper, params)
            # pin time stamps to k*dt so they do not accumulate roundoff
            state = state.at_time(k * config.dt)
            params = record(state)
    except (ValueError, RuntimeError) as exc:
        traj.failure = f"t={state.time:.17g}: {exc}"
    return traj


def picard_iterate(F0: DistributionState, n_iters: int, stats=Statistics.BOSE_EINSTEIN,
                   tol: SeriesTolerance = DEFAULT_TOL, t_grid=None) -> list[Trajectory]:
    """Iterates ``F^1 .. F^{n_iters+1}`` of the linearised scheme.

    ``F^{n+1}`` solves ``dF/dt = J[F^n](t) - F`` with ``F(0) = F0`` and
    ``F^0(t) = F0``.  Each iterate is integrated in closed form on
    ``t_grid`` with J interpolated linearly in t, which is exact when
    J[F^n] does not depend on t (the moment-matched case).
    """
    stats = Statistics(stats)
    if n_iters < 0:
        raise ValueError(f"n_iters must be nonnegative, got {n_iters!r}")
    t_grid = np.linspace(0.0, 10.0, 101) if t_grid is None else np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must start at 0 and increase strictly")
    grid = F0.grid
    previous = np.broadcast_to(F0.values, (t_grid.size, len(grid)))
    out = []
    for n in range(n_iters + 1):
        try:
            pairs = [_attractor(grid, f, stats, tol) for f in previous]
        except (ValueError, RuntimeError) as exc:
            raise PicardError(n, exc) from exc
        js = np.stack([j for j, _ in pairs])
        current = np.empty_like(js)
        current[0] = F0.values
        for i, h in enumerate(np.diff(t_grid)):
            decay = math.exp(-h)
            a = -math.expm1(-h)
            b = 1.0 - a / h
            current[i + 1] = decay * current[i] + (a - b) * js[i] + b * js[i + 1]
        traj = Trajectory(statistics=stats, matched=True)
        for t, f, (_, params) in zip(t_grid, current, pairs):
            state = DistributionState(grid, f, float(t))
            traj.states.append(state)
            traj.diagnostics.append(StepDiagnostics(float(t), moments(state), params))
        out.append(traj)
        previous = current
    return out


@dataclass
class ConservationReport:
    times: np.ndarray
    rho_drift: np.ndarray
    energy_drift: np.ndarray

    @property
    def max_rho_drift(self) -> float:
        return float(np.max(np.abs(self.rho_drift)))

    @property
    def max_energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy_drift)))

    @property
    def max_drift(self) -> float:
        return max(self.max_rho_drift, self.max_energy_drift)

    @property
    def worst_index(self) -> int:
        return int(np.argmax(np.maximum(np.abs(self.rho_drift), np.abs(self.energy_drift))))


def conservation_report(traj: Trajectory) -> ConservationReport:
    if not traj.states:
        raise ValueError("empty trajectory")
    ms = [moments(s) for s in traj.states]
    rho = np.array([m.rho for m in ms])
    energy = np.array([m.energy for m in ms])
    return ConservationReport(
        times=traj.times,
        rho_drift=rho / rho[0] - 1.0,
        energy_drift=energy / energy[0] - 1.0,
    )
