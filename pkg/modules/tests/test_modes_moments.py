import math
from dataclasses import replace

import numpy as np
import pytest

from modules.core import ArgumentError, BathParams, SpaceGrid
from modules.langevin.potentials import Free, Harmonic
from modules.pde import (
    MomentumGrid,
    extract_moments,
    free_mode_evolution,
    maxwell_boltzmann,
    mode_amplitude,
    residual_continuity,
    residual_force_balance,
    single_mode_density,
    solve_kramers,
)
from modules.pde.moments import continuity_residuals, force_balance_residuals, spatial_derivative
from modules.pde.modes import mode_polynomial


def test_classical_mode_root(classical_params):
    evolution = free_mode_evolution(2.0, classical_params, order="classical")
    assert evolution.physical == pytest.approx(-4.0)
    assert evolution.classical == pytest.approx(-4.0)
    assert evolution.stable


def test_semiclassical_root_solves_quadratic():
    params = BathParams(hbar=math.sqrt(0.12))
    evolution = free_mode_evolution(1.0, params)
    expected = (1.0 - math.sqrt(1.04)) / 0.02
    assert evolution.physical.real == pytest.approx(expected, rel=1e-12)
    assert abs(evolution.physical.imag) < 1e-14
    assert evolution.residual < 1e-14


def test_roots_at_special_temperature():
    params = BathParams(tau=0.01, T=1.0, hbar=math.sqrt(0.12))
    evolution = free_mode_evolution(1.0, params)
    assert evolution.physical == pytest.approx(-1.0, abs=1e-12)
    assert sorted(r.real for r in evolution.roots) == pytest.approx([-10.0, -1.0, 10.0])
    assert not evolution.stable
    assert evolution.unstable_roots[0].real == pytest.approx(10.0)
    report = evolution.report()
    assert report["physical"] == pytest.approx([-1.0, 0.0], abs=1e-12)
    assert len(report["unstable_roots"]) == 1


def test_bohm_term_stiffens_mode():
    params = BathParams(hbar=0.5, m=2.0)
    polynomial = mode_polynomial(2.0, params, 0.0, 0.0, bohm=True)
    assert polynomial[3].real == pytest.approx(4.0 + 0.25 * 16.0 / 8.0)
    evolution = free_mode_evolution(2.0, params, order="classical", bohm=True)
    assert evolution.physical.real == pytest.approx(-4.5 / 2.0)


def test_mode_argument_checks(classical_params):
    with pytest.raises(ArgumentError):
        free_mode_evolution(1.0, classical_params, order="exact")
    with pytest.raises(ArgumentError):
        free_mode_evolution(math.inf, classical_params)
    with pytest.raises(ArgumentError):
        single_mode_density(SpaceGrid(length=1.0, points=8, periodic=False), 1.0)


def test_single_mode_amplitude(ring):
    rho = single_mode_density(ring, 3.0, amplitude=0.2)
    assert rho.mass == pytest.approx(1.0)
    # ∫(1 + a cos)cos dr / L = a/2
    assert mode_amplitude(rho, 3.0) == pytest.approx(0.1, rel=1e-12)
    assert mode_amplitude(rho, 2.0) == pytest.approx(0.0, abs=1e-14)


def test_moments_of_shifted_maxwellian(ring):
    params = BathParams(m=2.0, T=0.5)
    momentum = MomentumGrid(p_max=8.0, points=128)
    f = maxwell_boltzmann(Free(), params, ring, momentum, shift=0.6)
    moments = extract_moments(f, mass=params.m)
    density = 1.0 / ring.length
    assert np.allclose(moments.density, density, rtol=1e-10)
    assert np.allclose(moments.velocity, 0.3, rtol=1e-8)
    assert np.allclose(moments.flux, 0.3 * density, rtol=1e-8)
    assert np.allclose(moments.pressure, params.T * density, rtol=1e-8)


def test_spatial_derivative(ring):
    values = np.sin(ring.r)
    assert np.allclose(spatial_derivative(values, ring), np.cos(ring.r), atol=2e-3)
    bounded = SpaceGrid(length=2.0, points=21, periodic=False)
    assert np.allclose(spatial_derivative(bounded.r**2, bounded)[1:-1], 2.0 * bounded.r[1:-1])


def test_equilibrium_satisfies_moment_equations(classical_params):
    grid = SpaceGrid(length=12.0, points=61, periodic=False)
    momentum = MomentumGrid(p_max=8.0, points=64)
    potential = Harmonic(stiffness=1.0)
    f0 = maxwell_boltzmann(potential, classical_params, grid, momentum)
    series = solve_kramers(f0, potential, classical_params, t_end=0.05)
    assert len(series) >= 3
    assert residual_continuity(series, classical_params.m) < 1e-8
    assert residual_force_balance(series, potential, classical_params) < 1e-8
    assert force_balance_residuals(series, potential, classical_params).shape == (len(series) - 2, grid.points)


def test_continuity_holds_for_evolving_state(classical_params):
    grid = SpaceGrid(length=12.0, points=161, periodic=False)
    momentum = MomentumGrid(p_max=8.0, points=64)
    density = np.exp(-((grid.r - 1.0) ** 2) / (2.0 * 0.7**2))
    f0 = maxwell_boltzmann(Free(), classical_params, grid, momentum, shift=0.5, density=density)
    series = solve_kramers(f0, Harmonic(stiffness=1.0), classical_params, t_end=0.2)
    residuals = continuity_residuals(series, classical_params.m)
    flux = extract_moments(series[len(series) // 2], classical_params.m).flux
    scale = float(np.max(np.abs(spatial_derivative(flux, grid))))
    assert float(np.max(np.abs(residuals))) < 0.1 * scale


def test_continuity_residual_detects_perturbed_snapshot(classical_params):
    grid = SpaceGrid(length=12.0, points=61, periodic=False)
    momentum = MomentumGrid(p_max=8.0, points=64)
    potential = Harmonic(stiffness=1.0)
    f0 = maxwell_boltzmann(potential, classical_params, grid, momentum)
    series = solve_kramers(f0, potential, classical_params, t_end=0.05)
    values = series.values.copy()
    values[0] *= 1.001
    perturbed = replace(series, values=values)
    assert residual_continuity(series, classical_params.m) < 1e-8
    assert residual_continuity(perturbed, classical_params.m) > 1e-6


def test_continuity_uses_particle_mass():
    params = BathParams(m=2.0, T=0.5)
    grid = SpaceGrid(length=12.0, points=161, periodic=False)
    momentum = MomentumGrid(p_max=8.0, points=64)
    density = np.exp(-((grid.r - 1.0) ** 2) / (2.0 * 0.7**2))
    f0 = maxwell_boltzmann(Free(), params, grid, momentum, shift=0.5, density=density)
    series = solve_kramers(f0, Free(), params, t_end=0.2)
    flux = extract_moments(series[len(series) // 2], params.m).flux
    scale = float(np.max(np.abs(spatial_derivative(flux, grid))))
    assert residual_continuity(series, params.m) < 0.1 * scale
    # потік з m = 1 удвічі більший за справжній
    assert residual_continuity(series, 1.0) > 0.5 * scale


def test_moment_residuals_need_three_snapshots(classical_params):
    grid = SpaceGrid(length=12.0, points=61, periodic=False)
    momentum = MomentumGrid(p_max=8.0, points=64)
    f0 = maxwell_boltzmann(Free(), classical_params, grid, momentum)
    series = solve_kramers(f0, Free(), classical_params, t_end=0.01, record_every=1000)
    assert len(series) == 2
    with pytest.raises(ArgumentError):
        residual_continuity(series, classical_params.m)
