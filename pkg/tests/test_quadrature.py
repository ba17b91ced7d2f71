import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from awbgk.initial import gamma_shell, perturbed_profile
from awbgk.quadrature import (
    DistributionState,
    MomentPair,
    build_grid,
    moment_match,
    moments,
    temperature,
)

# Frozen from tests/conftest.li_oracle: 8 pi Li_3(1/e), 24 pi Li_4(1/e).
RHO_BE = 9.726255853373033
ENERGY_BE = 28.427940943558685
T_BE = 0.9742680490184024


def gamma3(grid):
    return grid.integrate(grid.nodes**2 * np.exp(-grid.nodes))


def test_laguerre_gamma3():
    assert abs(gamma3(build_grid("laguerre", 32)) - 2.0) <= 1e-12


def test_uniform_gamma3():
    assert abs(gamma3(build_grid("uniform", 400, 40.0)) - 2.0) <= 1e-8


@pytest.mark.parametrize("kwargs", [
    {"rule_kind": "uniform", "n_nodes": 2, "r_max": 40.0},
    {"rule_kind": "laguerre", "n_nodes": 3},
    {"rule_kind": "laguerre", "n_nodes": 10.5},
    {"rule_kind": "uniform", "n_nodes": 400, "r_max": 0.0},
    {"rule_kind": "uniform", "n_nodes": 400, "r_max": -1.0},
    {"rule_kind": "uniform", "n_nodes": 400},
    {"rule_kind": "laguerre", "n_nodes": 64, "r_max": 40.0},
    {"rule_kind": "simpson", "n_nodes": 64},
])
def test_build_grid_rejects(kwargs):
    with pytest.raises(ValueError):
        build_grid(**kwargs)


@pytest.mark.parametrize("spec", [("laguerre", 4, None), ("laguerre", 64, None),
                                  ("uniform", 4, 10.0), ("uniform", 400, 40.0)])
def test_grid_invariants(spec):
    g = build_grid(*spec)
    assert len(g.nodes) == len(g.weights) == spec[1]
    assert np.all(g.nodes > 0) and np.all(np.diff(g.nodes) > 0)
    assert np.all(g.weights > 0)


def test_laguerre_polynomial_exactness():
    n = 8
    g = build_grid("laguerre", n)
    for j in range(2 * n):
        got = g.integrate(g.nodes**j * np.exp(-g.nodes))
        assert got == pytest.approx(math.factorial(j), rel=1e-12)


def test_scaled_laguerre_targets_scaled_weight():
    g = build_grid("laguerre", 16, scale=2.0)
    # int r^3 e^{-2r} dr = 3!/2^4
    assert g.integrate(g.nodes**3 * np.exp(-2 * g.nodes)) == pytest.approx(6 / 16, rel=1e-13)


def test_grid_is_read_only(grid):
    with pytest.raises(ValueError):
        grid.nodes[0] = 1.0


def test_state_rejects_negative_and_wrong_length(grid):
    with pytest.raises(ValueError):
        DistributionState(grid, -np.ones(len(grid)))
    with pytest.raises(ValueError):
        DistributionState(grid, np.ones(len(grid) + 1))
    with pytest.raises(ValueError):
        DistributionState(grid, np.ones(len(grid)), time=-1.0)


def test_moments_of_mb_global_equilibrium(grid):
    m = moments(DistributionState.from_profile(grid, lambda r: np.exp(-r)))
    assert m.rho == pytest.approx(8 * math.pi, rel=1e-13)
    assert m.energy == pytest.approx(24 * math.pi, rel=1e-13)


def test_moments_of_zero(grid):
    assert moments(DistributionState(grid, np.zeros(len(grid)))).as_tuple() == (0.0, 0.0)


@pytest.mark.parametrize("g", ["grid", "uniform_grid"])
def test_moments_of_be_global_equilibrium(g, request):
    grid = request.getfixturevalue(g)
    m = moments(DistributionState.from_profile(grid, lambda r: 1 / np.expm1(1 + r)))
    assert m.rho == pytest.approx(RHO_BE, rel=10 * grid.tol)
    assert m.energy == pytest.approx(ENERGY_BE, rel=10 * grid.tol)


def test_temperature():
    assert temperature(MomentPair(8 * math.pi, 24 * math.pi)) == pytest.approx(1.0, rel=1e-15)
    assert temperature(MomentPair(RHO_BE, ENERGY_BE)) == pytest.approx(T_BE, rel=1e-14)
    with pytest.raises(ValueError):
        temperature(MomentPair(0.0, 1.0))


def test_moment_match_identity(grid):
    f = moment_match(grid, lambda r: np.exp(-r), MomentPair(8 * math.pi, 24 * math.pi))
    np.testing.assert_allclose(f.values, np.exp(-grid.nodes), rtol=1e-12)


def test_moment_match_gamma_shell_closed_form(grid):
    # A r e^{-a r}: rho = 4 pi A 3!/a^4, E = 4 pi A 4!/a^5 -> a = 4/3, A = a^4/3
    f = moment_match(grid, gamma_shell(1.0, 1.0), MomentPair(8 * math.pi, 24 * math.pi))
    a = 4.0 / 3.0
    A = 1.0534979423868311
    assert A == pytest.approx(2 * a**4 / 6, rel=1e-15)
    np.testing.assert_allclose(f.values, A * grid.nodes * np.exp(-a * grid.nodes), rtol=1e-11, atol=1e-300)


def test_moment_match_be_identity(grid):
    f = moment_match(grid, lambda r: 1 / np.expm1(1 + r), MomentPair(RHO_BE, ENERGY_BE))
    # lam carries ~1e-13 error, amplified by r ~ 200 at the last node
    np.testing.assert_allclose(f.values, 1 / np.expm1(1 + grid.nodes), rtol=1e-10)


def test_moment_match_rejects_bad_templates(grid):
    target = MomentPair(8 * math.pi, 24 * math.pi)
    with pytest.raises(ValueError):
        moment_match(grid, lambda r: np.zeros_like(r), target)
    with pytest.raises(ValueError):
        moment_match(grid, lambda r: np.sin(r) * np.exp(-r), target)
    with pytest.raises(ValueError):
        moment_match(grid, lambda r: np.exp(-r), MomentPair(0.0, 1.0))


@given(s=st.floats(1e-100, 1e100))
def test_moment_homogeneity(grid, s):
    f = DistributionState.from_profile(grid, lambda r: r * np.exp(-1.3 * r))
    m, ms = moments(f), moments(f.scaled(s))
    assert ms.rho == pytest.approx(s * m.rho, rel=1e-14, abs=0)
    assert ms.energy == pytest.approx(s * m.energy, rel=1e-14, abs=0)


@given(lam=st.floats(0.5, 2.0))
def test_scaling_law(grid, lam):
    base = moments(DistributionState.from_profile(grid, lambda r: np.exp(-r)))
    m = moments(DistributionState.from_profile(grid, lambda r: np.exp(-lam * r)))
    assert m.rho == pytest.approx(base.rho / lam**3, rel=grid.tol)
    assert m.energy == pytest.approx(base.energy / lam**4, rel=grid.tol)


@settings(max_examples=50)
@given(k=st.floats(0.0, 3.0), a=st.floats(0.5, 2.0),
       rho=st.floats(0.5, 50.0), T=st.floats(0.5, 2.0))
def test_moment_match_round_trip_gamma_shell(grid, k, a, rho, T):
    target = MomentPair(rho, 3 * rho * T)
    m = moments(moment_match(grid, gamma_shell(k, a), target))
    assert m.rho == pytest.approx(rho, rel=10 * grid.tol)
    assert m.energy == pytest.approx(target.energy, rel=10 * grid.tol)


@settings(max_examples=30)
@given(stats=st.sampled_from(["mb", "be"]), eps=st.floats(-0.5, 2.0),
       center=st.floats(0.5, 5.0), width=st.floats(0.3, 2.0))
def test_moment_match_round_trip_perturbed(grid, stats, eps, center, width):
    target = MomentPair(RHO_BE, ENERGY_BE) if stats == "be" else MomentPair(8 * math.pi, 24 * math.pi)
    m = moments(moment_match(grid, perturbed_profile(stats, eps, center, width), target))
    assert m.rho == pytest.approx(target.rho, rel=10 * grid.tol)
    assert m.energy == pytest.approx(target.energy, rel=10 * grid.tol)


def test_grid_match_detection(grid):
    assert grid.matches(build_grid("laguerre", 64))
    assert not grid.matches(build_grid("laguerre", 32))
