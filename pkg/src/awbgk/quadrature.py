"""Radial quadrature for isotropic distributions in covariant momentum space.

Every functional of F that enters the relaxation model is an isotropic
integral, ``int g(|v|) dv = 4 pi int_0^inf g(r) r^2 dr``, so a distribution
is stored as its samples on a one-dimensional radial grid.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import bernoulli, roots_laguerre

FOUR_PI = 4.0 * math.pi

Profile = Callable[[np.ndarray], np.ndarray]


class RuleKind(str, enum.Enum):
    LAGUERRE = "laguerre"
    UNIFORM = "uniform"


# Gregory end-correction order for the uniform rule. Order 8 is the highest
# whose weights stay positive.
_GREGORY_ORDER = 8


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Nodes and weights with ``sum(w * f(r)) ~ int_0^inf f(r) dr``.

    ``tol`` is the relative accuracy the rule is declared to reach on the
    moment integrands of smooth, exponentially decaying distributions.
    """

    nodes: np.ndarray
    weights: np.ndarray
    rule_kind: RuleKind
    r_max: float | None = None
    scale: float = 1.0
    tol: float = 1e-12

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be positive and strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def sample(self, profile: Profile) -> np.ndarray:
        return np.asarray(profile(self.nodes), dtype=float)

    def matches(self, other: "RadialGrid") -> bool:
        return self is other or (
            np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )


def _laguerre_rule(n_nodes: int, scale: float):
    x, w = roots_laguerre(n_nodes)
    # Fold the e^{-x} weight back in so the rule acts on plain integrands.
    return x / scale, w * np.exp(x) / scale


def _gregory_end_weights(order: int) -> np.ndarray:
    # Corrections c solve sum_i c_i i^j = B_{j+1}/(j+1) (odd j), 0 (even j),
    # cancelling the left-end Euler-Maclaurin terms of the trapezoid rule.
    b = bernoulli(order + 1)
    i = np.arange(order, dtype=float)
    rhs = np.array([b[j + 1] / (j + 1) if j % 2 else 0.0 for j in range(order)])
    corr = np.linalg.solve(np.vander(i, order, increasing=True).T, rhs)
    base = np.ones(order)
    base[0] = 0.5
    return base + corr


def _uniform_rule(n_nodes: int, r_max: float):
    h = r_max / n_nodes
    nodes = h * np.arange(1, n_nodes + 1)
    weights = np.full(n_nodes, h)
    order = min(_GREGORY_ORDER, n_nodes // 2)
    end = _gregory_end_weights(order)
    # The origin node is dropped: moment integrands carry r^2 and vanish there.
    weights[: order - 1] = h * end[1:]
    weights[-order:] = h * end[::-1]
    return nodes, weights


def build_grid(rule_kind="laguerre", n_nodes: int = 64, r_max: float | None = None,
               scale: float = 1.0) -> RadialGrid:
    """Build a radial grid.

    ``laguerre`` is Gauss-Laguerre for the weight ``exp(-scale * r)``;
    ``uniform`` is an end-corrected trapezoid rule on ``(0, r_max]`` that
    assumes the integrand vanishes at the origin.
    """
    rule_kind = RuleKind(rule_kind)
    if int(n_nodes) != n_nodes or n_nodes < 4:
        raise ValueError(f"invalid node count {n_nodes!r}; need an integer >= 4")
    n_nodes = int(n_nodes)
    if rule_kind is RuleKind.LAGUERRE:
        if r_max is not None:
            raise ValueError("r_max applies only to the uniform rule")
        if not scale > 0:
            raise ValueError(f"scale must be positive, got {scale!r}")
        nodes, weights = _laguerre_rule(n_nodes, scale)
        tol = 1e-12 if n_nodes >= 32 else 1e-8
        return RadialGrid(nodes, weights, rule_kind, None, float(scale), tol)
    if r_max is None:
        raise ValueError("the uniform rule requires r_max")
    if not r_max > 0:
        raise ValueError(f"r_max must be positive, got {r_max!r}")
    nodes, weights = _uniform_rule(n_nodes, float(r_max))
    tol = 1e-8 if (n_nodes >= 400 and r_max >= 40.0) else 1e-6
    return RadialGrid(nodes, weights, rule_kind, float(r_max), 1.0, tol)


DEFAULT_GRID_SPEC = {"rule_kind": "laguerre", "n_nodes": 64}


def default_grid() -> RadialGrid:
    return build_grid(**DEFAULT_GRID_SPEC)


@dataclass(frozen=True, eq=False)
class DistributionState:
    grid: RadialGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"state has {values.size} samples but the grid has {len(self.grid)} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("distribution values must be finite")
        if np.any(values < 0):
            raise ValueError("distribution values must be nonnegative")
        if self.time < 0:
            raise ValueError(f"time must be nonnegative, got {self.time!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_profile(cls, grid: RadialGrid, profile: Profile, time: float = 0.0):
        return cls(grid, grid.sample(profile), time)

    def at_time(self, time: float) -> "DistributionState":
        return DistributionState(self.grid, self.values, time)

    def scaled(self, factor: float) -> "DistributionState":
        return DistributionState(self.grid, factor * self.values, self.time)


@dataclass(frozen=True)
class MomentPair:
    """Number moment ``int F dv`` and energy moment ``int |v| F dv``."""

    rho: float
    energy: float

    def as_tuple(self):
        return (self.rho, self.energy)


def moments(state: DistributionState) -> MomentPair:
    return moments_of(state.grid, state.values)


def moments_of(grid: RadialGrid, values) -> MomentPair:
    """Moments of raw samples, which need not be a valid state."""
    r = grid.nodes
    w = grid.weights
    f = values
    return MomentPair(
        rho=FOUR_PI * float(np.dot(w, r**2 * f)),
        energy=FOUR_PI * float(np.dot(w, r**3 * f)),
    )


def temperature(m: MomentPair) -> float:
    """T with ``3 T = energy / rho``."""
    if not m.rho > 0:
        raise ValueError(f"temperature needs a positive number moment, got rho={m.rho!r}")
    return m.energy / (3.0 * m.rho)


def moment_match(grid: RadialGrid, template: Profile, target: MomentPair,
                 max_refine: int = 50) -> DistributionState:
    """Rescale ``template`` to ``alpha * G(lam * r)`` with the target moments.

    ``(alpha, lam)`` come from the exact scaling laws ``rho -> alpha lam^-3
    rho`` and ``energy -> alpha lam^-4 energy``; a few passes against the
    grid moments then absorb the quadrature error so the match is exact on
    the grid.  The passes converge linearly, slowly when the template is
    poorly resolved; ValueError if they have not settled after
    ``max_refine`` passes.
    """
    if not (target.rho > 0 and target.energy > 0):
        raise ValueError(f"target moments must be positive, got {target}")
    base = DistributionState.from_profile(grid, template)
    m0 = moments(base)
    if not (m0.rho > 0 and m0.energy > 0):
        raise ValueError("template must be nonzero on the grid")
    target_ratio = target.energy / target.rho
    lam = 1.0
    for _ in range(max_refine + 1):
        # energy/rho scales as 1/lam
        lam *= (m0.energy / m0.rho) / target_ratio
        shaped = DistributionState.from_profile(grid, lambda r: template(lam * r))
        m0 = moments(shaped)
        mismatch = abs((m0.energy / m0.rho) / target_ratio - 1.0)
        if mismatch <= 4 * np.finfo(float).eps:
            break
    else:
        if mismatch > 1e-13:
            raise ValueError(f"moment matching stalled at relative mismatch {mismatch:.1e}; "
                             "template is under-resolved on this grid")
    return shaped.scaled(target.rho / m0.rho)
