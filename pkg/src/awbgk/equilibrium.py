"""Juttner attractor J(F) for massless particles.

Maxwell-Boltzmann statistics have a closed form in the two moments.  For
Bose-Einstein statistics the occupation ``1/(exp(c + gamma r) - 1)`` is
pinned down by inverting the monotone map

    beta(c) = (8 pi / 27) Li_3(e^-c)^4 / Li_4(e^-c)^3

at ``rho / (3T)^3`` and then reading off gamma from the number moment.
Polylogarithms at ``z = e^-c`` are summed as series; sums are carried
scaled by ``e^c`` so that large ``c`` never underflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .quadrature import FOUR_PI, DistributionState, MomentPair, RadialGrid, temperature

BETA_PREFACTOR = 8.0 * math.pi / 27.0

# Below this c the truncated series loses accuracy (its tail is about
# term/c); the expansion of Li_s(e^-c) about c = 0 is exact to rounding here.
SMALL_C = 0.1

# Bracket limits for the c root-finder.
C_FLOOR = 1e-14
C_CAP = 1e3
MAX_ITER = 200

_FIRST_CHUNK = 64
_MAX_CHUNK = 8192


class Statistics(str, enum.Enum):
    MAXWELL_BOLTZMANN = "mb"
    BOSE_EINSTEIN = "be"


class AperyRangeError(ValueError):
    """``rho/(3T)^3`` lies outside ``(0, beta(0+))``; no BE equilibrium with c > 0."""

    def __init__(self, ratio: float, bound: float):
        self.ratio = ratio
        self.bound = bound
        super().__init__(
            f"rho/(3T)^3 = {ratio:.17g} is outside the admissible range "
            f"(0, {bound:.17g}); no Bose-Einstein equilibrium with c > 0"
        )


class SeriesBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class SeriesTolerance:
    abs_tol: float = 1e-14
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.abs_tol >= 1e-15:
            raise ValueError(f"abs_tol must be >= 1e-15, got {self.abs_tol!r}")
        if not self.max_terms >= 10:
            raise ValueError(f"max_terms must be >= 10, got {self.max_terms!r}")


DEFAULT_TOL = SeriesTolerance()


@dataclass(frozen=True)
class MBParams:
    rho: float
    T: float

    def __post_init__(self):
        if not (self.rho > 0 and self.T > 0):
            raise ValueError(f"MB parameters must be positive, got rho={self.rho!r}, T={self.T!r}")

    @property
    def statistics(self):
        return Statistics.MAXWELL_BOLTZMANN


@dataclass(frozen=True)
class BEParams:
    c: float
    gamma: float

    def __post_init__(self):
        if not (self.c > 0 and self.gamma > 0):
            raise ValueError(f"BE parameters must be positive, got c={self.c!r}, gamma={self.gamma!r}")

    @property
    def statistics(self):
        return Statistics.BOSE_EINSTEIN


EquilibriumParams = MBParams | BEParams


def mb_eval(params: MBParams, r):
    T = params.T
    return params.rho / (8.0 * math.pi * T**3) * np.exp(-np.asarray(r) / T)


def be_eval(params: BEParams, r):
    return 1.0 / np.expm1(params.c + params.gamma * np.asarray(r))


def evaluate(params: EquilibriumParams, r):
    if isinstance(params, MBParams):
        return mb_eval(params, r)
    return be_eval(params, r)


def equilibrium_state(grid: RadialGrid, params: EquilibriumParams, time: float = 0.0):
    return DistributionState(grid, evaluate(params, grid.nodes), time)


def global_equilibrium(stats) -> EquilibriumParams:
    """``exp(-r)`` for MB, ``1/(exp(1 + r) - 1)`` for BE."""
    if Statistics(stats) is Statistics.MAXWELL_BOLTZMANN:
        return MBParams(rho=8.0 * math.pi, T=1.0)
    return BEParams(c=1.0, gamma=1.0)


# -- polylogarithms at z = e^-c ------------------------------------------------

def _scaled_series(s: int, c: float, tol: SeriesTolerance) -> float:
    """``e^c Li_s(e^-c) = sum_k e^{-c(k-1)} / k^s``, stopped once the next
    term falls below ``abs_tol`` times the running sum."""
    if not c > 0:
        raise ValueError(f"the Bose-Einstein series needs c > 0, got c={c!r}")
    total = 0.0
    start = 1
    chunk = _FIRST_CHUNK
    while start <= tol.max_terms:
        k = np.arange(start, min(start + chunk, tol.max_terms + 1), dtype=float)
        terms = np.exp(-c * (k - 1.0)) / k**s
        partial = total + np.cumsum(terms)
        # term k+1 is compared against the sum through k
        done = np.nonzero(terms[1:] < tol.abs_tol * partial[:-1])[0]
        if done.size:
            return float(partial[done[0]])
        total = float(partial[-1])
        start += k.size
        chunk = min(2 * chunk, _MAX_CHUNK)
    raise SeriesBudgetError(
        f"series for Li_{s}(e^-c) at c={c!r} did not reach abs_tol={tol.abs_tol} "
        f"within {tol.max_terms} terms"
    )


def _small_c_polylog(s: int, c: float, n_terms: int = 16) -> float:
    """Li_s(e^-c) for integer s >= 2 from its expansion about c = 0:
    ``(-c)^{s-1}/(s-1)! (H_{s-1} - ln c) + sum_{k != s-1} zeta(s-k) (-c)^k / k!``."""
    harmonic = sum(1.0 / j for j in range(1, s))
    total = (-c) ** (s - 1) / math.factorial(s - 1) * (harmonic - math.log(c))
    for k in range(n_terms):
        if k != s - 1:
            total += float(zeta(float(s - k))) * (-c) ** k / math.factorial(k)
    return total


def _scaled_li(s: int, c: float, tol: SeriesTolerance) -> float:
    if not c > 0:
        raise ValueError(f"c must be positive, got c={c!r}")
    if c < SMALL_C:
        return math.exp(c) * _small_c_polylog(s, c)
    return _scaled_series(s, c, tol)


def bose_series(n: int, c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """``int_0^inf r^n / (e^{c + r} - 1) dr = n! Li_{n+1}(e^-c)`` by direct summation."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return math.factorial(n) * math.exp(-c) * _scaled_series(n + 1, c, tol)


def bose_integral(n: int, c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Same quantity as :func:`bose_series`, also valid for ``c < SMALL_C``."""
    return math.factorial(n) * math.exp(-c) * _scaled_li(n + 1, c, tol)


# -- beta(c) and its inversion ---------------------------------------------------

def log_beta(c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    s3 = _scaled_li(3, c, tol)
    s4 = _scaled_li(4, c, tol)
    return math.log(BETA_PREFACTOR) - c + 4.0 * math.log(s3) - 3.0 * math.log(s4)


def beta(c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    return math.exp(log_beta(c, tol))


def _log_beta_and_slope(c: float, tol: SeriesTolerance):
    # d(ln beta)/dc = (3 Li_3^2 - 4 Li_2 Li_4) / (Li_3 Li_4); the e^c scaling cancels
    s2 = _scaled_li(2, c, tol)
    s3 = _scaled_li(3, c, tol)
    s4 = _scaled_li(4, c, tol)
    log_b = math.log(BETA_PREFACTOR) - c + 4.0 * math.log(s3) - 3.0 * math.log(s4)
    return log_b, (3.0 * s3 * s3 - 4.0 * s2 * s4) / (s3 * s4)


def log_beta_derivative(c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    return _log_beta_and_slope(c, tol)[1]


def beta_derivative(c: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    return beta(c, tol) * log_beta_derivative(c, tol)


def beta_limit_zero() -> float:
    """``beta(0+) = (8 pi/27) zeta(3)^4 / zeta(4)^3``, the supremum of beta."""
    return BETA_PREFACTOR * float(zeta(3.0)) ** 4 / float(zeta(4.0)) ** 3


def solve_c(target: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Unique c > 0 with ``beta(c) = target``.

    Brackets by doubling or halving from c = 1, then runs Newton on
    ``ln beta(c) - ln target`` and bisects whenever a Newton step leaves
    the bracket.

    beta has a finite slope at 0+, so c is recovered to about 1e-16 in
    absolute terms; below c ~ 1e-6 that is a poor relative accuracy.
    """
    bound = beta_limit_zero()
    if not (0.0 < target < bound):
        raise AperyRangeError(target, bound)
    log_target = math.log(target)

    def g(c):
        return log_beta(c, tol) - log_target

    # beta is decreasing: g > 0 means the root lies above c.
    c = 1.0
    if g(c) > 0:
        lo, hi = c, 2.0 * c
        while g(hi) > 0:
            if hi >= C_CAP:
                raise ValueError(f"root for target={target!r} lies above c={C_CAP}")
            lo, hi = hi, min(2.0 * hi, C_CAP)
    else:
        lo, hi = 0.5 * c, c
        while g(lo) < 0:
            if lo <= C_FLOOR:
                raise ValueError(f"root for target={target!r} lies below c={C_FLOOR}")
            lo, hi = max(0.5 * lo, C_FLOOR), lo

    c = 1.0
    for _ in range(MAX_ITER):
        gc, slope = _log_beta_and_slope(c, tol)
        gc -= log_target
        if abs(gc) <= tol.abs_tol:
            return c
        if gc > 0:
            lo = max(lo, c)
        else:
            hi = min(hi, c)
        step = c - gc / slope
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if abs(step - c) <= 4.0 * np.finfo(float).eps * c:
            return step
        c = step
    raise RuntimeError(f"solve_c did not converge for target={target!r}")


def gamma_from(c: float, rho: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """gamma with ``gamma^-3 int dv / (e^{c+|v|} - 1) = rho``."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    return (FOUR_PI * bose_integral(2, c, tol) / rho) ** (1.0 / 3.0)


def apery_ratio(m: MomentPair) -> float:
    """``rho / (3T)^3``, the quantity beta(c) must reproduce."""
    return m.rho / (3.0 * temperature(m)) ** 3


def build_equilibrium(m: MomentPair, stats, tol: SeriesTolerance = DEFAULT_TOL) -> EquilibriumParams:
    if not (m.rho > 0 and m.energy > 0):
        raise ValueError(f"moments must be positive, got {m}")
    if Statistics(stats) is Statistics.MAXWELL_BOLTZMANN:
        return MBParams(rho=m.rho, T=temperature(m))
    c = solve_c(apery_ratio(m), tol)
    return BEParams(c=c, gamma=gamma_from(c, m.rho, tol))
