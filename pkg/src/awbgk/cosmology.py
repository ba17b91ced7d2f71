"""Radiation-era FLRW background and contravariant-frame views of a state.

The solver evolves F in covariant momentum ``v = R^2 p``, where the
equation carries no explicit scale factor.  Everything here is a derived
view at a given cosmic time and never feeds back into the dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import FOUR_PI, DistributionState


@dataclass(frozen=True)
class ScaleFactor:
    """``R(t) = C (t + t0)^{1/2}``."""

    C: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        if not (self.C > 0 and self.t0 > 0):
            raise ValueError(f"C and t0 must be positive, got C={self.C!r}, t0={self.t0!r}")

    def __call__(self, t):
        return self.C * np.sqrt(np.asarray(t) + self.t0)


def scale_factor(sf: ScaleFactor, t: float) -> tuple[float, float, float]:
    """``(R, dR/dt, d2R/dt2)`` at time t."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    s = t + sf.t0
    root = math.sqrt(s)
    return sf.C * root, sf.C / (2.0 * root), -sf.C / (4.0 * s * root)


def hubble(sf: ScaleFactor, t: float) -> float:
    R, Rdot, _ = scale_factor(sf, t)
    return Rdot / R


def characteristic_map(y, sf: ScaleFactor, t: float):
    """Physical momentum ``p(t) = y / R(t)^2`` on the characteristic labelled y.

    The label y is the conserved covariant momentum ``v = R^2 p``; it
    coincides with ``p(0)`` only when ``R(0) = 1``.
    """
    R, _, _ = scale_factor(sf, t)
    return np.asarray(y, dtype=float) / R**2


def covariant_momentum(p, sf: ScaleFactor, t: float):
    """Inverse of :func:`characteristic_map`: ``v = R(t)^2 p``."""
    R, _, _ = scale_factor(sf, t)
    return R**2 * np.asarray(p, dtype=float)


def four_momentum(p, R: float) -> np.ndarray:
    """Contravariant ``p^a = (R|p|, p)`` of a massless particle."""
    p = np.asarray(p, dtype=float)
    return np.concatenate([[R * np.linalg.norm(p)], p])


def lower_index(p_up, R: float) -> np.ndarray:
    """``v_a = eta_ab p^b`` with ``eta = diag(-1, R^2, R^2, R^2)``."""
    p_up = np.asarray(p_up, dtype=float)
    return np.concatenate([[-p_up[0]], R**2 * p_up[1:]])


def mass_shell(p_up, R: float) -> float:
    """``eta_ab p^a p^b``; zero for massless particles."""
    p_up = np.asarray(p_up, dtype=float)
    return -p_up[0] ** 2 + R**2 * float(np.dot(p_up[1:], p_up[1:]))


@dataclass(frozen=True)
class PhysicalMoments:
    n: float  # particle number density
    e: float  # energy per particle
    P: float  # pressure

    @property
    def eos_residual(self) -> float:
        """Relative violation of ``e n = 3 P``."""
        return abs(self.e * self.n - 3.0 * self.P) / (self.e * self.n)


def physical_moments(state: DistributionState, sf: ScaleFactor, t: float) -> PhysicalMoments:
    """n, e and P from the p-frame integrals at time t.

    The covariant grid is mapped to physical momenta ``p_i = r_i / R^2``
    (weights scale by ``R^-2``) and the integrals are taken there, with
    ``p^0 = R |p|`` from the mass shell and ``sqrt(-det eta) = R^3``.
    """
    R, _, _ = scale_factor(sf, t)
    p = state.grid.nodes / R**2
    w = FOUR_PI * state.grid.weights / R**2 * p**2
    f = state.values
    number = float(np.dot(w, f))
    if not number > 0:
        raise ValueError("physical moments are undefined for a zero state")
    p0 = R * p
    n = R**3 * number
    e = R * float(np.dot(w, p * f)) / number
    P = R**5 / 3.0 * float(np.dot(w, p**2 * f / p0))
    return PhysicalMoments(n=n, e=e, P=P)


def friedmann_residuals(state: DistributionState, sf: ScaleFactor, t: float) -> tuple[float, float]:
    """Residuals of the Friedmann and acceleration equations.

    ``r1 = (R'/R)^2 - (8 pi/3) e n`` and ``r2 = R''/R + (4 pi/3)(e n + 3 P)``.
    R is prescribed, so these are diagnostics; both vanish only for a state
    calibrated with :func:`calibrate_state`.
    """
    R, Rdot, Rddot = scale_factor(sf, t)
    pm = physical_moments(state, sf, t)
    en = pm.e * pm.n
    r1 = (Rdot / R) ** 2 - 8.0 * math.pi / 3.0 * en
    r2 = Rddot / R + 4.0 * math.pi / 3.0 * (en + 3.0 * pm.P)
    return r1, r2


def calibrate_state(state: DistributionState, sf: ScaleFactor, t: float) -> DistributionState:
    """Rescale the state so that ``e n = 3 (R'/R)^2 / (8 pi)`` at time t."""
    pm = physical_moments(state, sf, t)
    target = 3.0 * hubble(sf, t) ** 2 / (8.0 * math.pi)
    # e is scale-invariant, n is linear in the amplitude
    return state.scaled(target / (pm.e * pm.n))
