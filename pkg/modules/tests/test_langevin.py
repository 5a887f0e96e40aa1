import math

import numpy as np
import pytest

from modules.analysis.cutoff import momentum_dispersion_integral, solve_cutoff
from modules.core import ArgumentError, BathParams, ConfigValidationError, SpaceGrid, StepSizeError, TimeGrid
from modules.langevin.ensemble import block_means, boltzmann_chi_square, momentum_dispersion_empirical, run_ensemble
from modules.langevin.integrator import check_step, integrate, integrate_forcing
from modules.langevin.potentials import DoubleWell, Free, Harmonic, Tabulated, potential_from_config


def test_check_step_limits():
    check_step(Harmonic(stiffness=1.0), mass=1.0, gamma=1.0, dt=0.05)
    with pytest.raises(StepSizeError) as info:
        check_step(Free(), mass=1.0, gamma=2.0, dt=0.05)
    assert info.value.suggested_dt == pytest.approx(0.025)
    with pytest.raises(StepSizeError):
        check_step(Harmonic(stiffness=100.0), mass=1.0, gamma=0.1, dt=0.05)


def test_free_particle_relaxation_without_noise(classical_params):
    grid = TimeGrid(dt=0.01, n=101)
    trajectory = integrate(Free(), classical_params, grid, None, ([0.0], [1.0]))
    assert trajectory.momenta[-1, 0] == pytest.approx(math.exp(-1.0), rel=1e-4)
    assert trajectory.positions[-1, 0] == pytest.approx(1.0 - math.exp(-1.0), rel=1e-4)
    assert trajectory.times[-1] == pytest.approx(1.0)


def test_integrate_rejects_foreign_noise_grid(classical_params):
    from modules.noise import sample_noise

    noise = sample_noise(TimeGrid(dt=0.01, n=128), classical_params, 10.0, 0)
    with pytest.raises(ArgumentError):
        integrate(Free(), classical_params, TimeGrid(dt=0.01, n=256), noise, ([0.0], [0.0]))


def _forced_positions(dt: float, total: float = 5.0) -> np.ndarray:
    n = int(round(total / dt)) + 1
    times = dt * np.arange(n)
    forcing = np.cos(2.0 * times)[:, np.newaxis]
    trajectory = integrate_forcing(Harmonic(stiffness=1.0), 1.0, 0.5, dt, forcing, (np.array([1.0]), np.array([0.0])))
    return trajectory.positions[:, 0]


def test_heun_scheme_is_second_order():
    coarse, fine, reference = 0.02, 0.01, 0.02 / 64
    exact = _forced_positions(reference)
    error_coarse = np.max(np.abs(_forced_positions(coarse) - exact[::64]))
    error_fine = np.max(np.abs(_forced_positions(fine) - exact[::32]))
    assert 3.5 < error_coarse / error_fine < 4.5


def test_batched_forcing_matches_single_runs():
    rng = np.random.default_rng(1)
    forcing = rng.standard_normal((200, 3, 1))
    zeros = np.zeros((3, 1))
    batch = integrate_forcing(DoubleWell(), 1.0, 1.0, 0.01, forcing, (zeros, zeros))
    single = integrate_forcing(DoubleWell(), 1.0, 1.0, 0.01, forcing[:, 1], (zeros[1], zeros[1]))
    assert np.allclose(batch.positions[:, 1], single.positions)


def test_double_well_gradient_matches_energy():
    potential = DoubleWell(quartic=0.5, quadratic=2.0)
    r = np.linspace(-2.0, 2.0, 11)
    h = 1e-6
    numeric = (potential.energy_1d(r + h) - potential.energy_1d(r - h)) / (2.0 * h)
    assert np.allclose(potential.gradient_1d(r), numeric, atol=1e-6)
    assert potential.energy_1d(np.array([math.sqrt(2.0)]))[0] == pytest.approx(-2.0)


def test_tabulated_potential_reproduces_harmonic():
    grid = SpaceGrid(length=8.0, points=81, periodic=False)
    harmonic = Harmonic(stiffness=2.0)
    table = Tabulated(grid, harmonic.energy_1d(grid.r))
    r = np.array([-1.23, 0.0, 2.5])
    assert np.allclose(table.energy_1d(r), harmonic.energy_1d(r), atol=1e-10)
    assert np.allclose(table.gradient_1d(r), harmonic.gradient_1d(r), atol=1e-8)
    assert table.max_frequency(1.0) == pytest.approx(math.sqrt(2.0), rel=1e-6)
    with pytest.raises(ArgumentError):
        Tabulated(grid, np.zeros(5))


def test_potential_from_config_kinds():
    assert isinstance(potential_from_config({"kind": "free"}), Free)
    harmonic = potential_from_config({"kind": "harmonic", "stiffness": 3.0, "center": 1.0})
    assert harmonic == Harmonic(3.0, 1.0)
    table = potential_from_config(
        {"kind": "tabulated", "grid": {"length": 4.0, "points": 5}, "values": [4.0, 1.0, 0.0, 1.0, 4.0], "order": 1}
    )
    assert table.energy_1d(np.array([0.5]))[0] == pytest.approx(0.5)
    with pytest.raises(ConfigValidationError):
        potential_from_config({"kind": "morse"})


def test_block_means():
    series = np.arange(10.0)
    assert np.allclose(block_means(series, 3), [1.0, 4.0, 7.0])
    with pytest.raises(ArgumentError):
        block_means(series, 11)


def test_ensemble_warns_about_short_burn_in(classical_params):
    grid = TimeGrid(dt=0.01, n=2048)
    stats = run_ensemble(Free(), classical_params, grid, grid.nyquist, seeds=[0, 1], burn_in=1.0, blocks=8)
    assert stats.warnings
    assert stats.realization_count == 2
    assert stats.to_dict()["observables"]["momentum_dispersion"]["block_count"] == 16
    with pytest.raises(ArgumentError):
        run_ensemble(Free(), classical_params, grid, grid.nyquist, seeds=[])


def test_ensemble_is_thread_count_independent(classical_params):
    grid = TimeGrid(dt=0.01, n=2048)
    serial = run_ensemble(Free(), classical_params, grid, 50.0, seeds=range(4), chunk=1, blocks=8)
    threaded = run_ensemble(Free(), classical_params, grid, 50.0, seeds=range(4), chunk=1, blocks=8, threads=3)
    assert momentum_dispersion_empirical(serial) == momentum_dispersion_empirical(threaded)


@pytest.mark.slow
@pytest.mark.parametrize("hbar", [0.0, 1.0])
def test_momentum_dispersion_matches_cutoff_integral(hbar):
    params = BathParams(m=1.0, gamma=1.0, T=1.0, hbar=hbar)
    grid = TimeGrid(dt=0.01, n=16384)
    cutoff = grid.nyquist if hbar == 0.0 else solve_cutoff(params).omega
    stats = run_ensemble(Free(), params, grid, cutoff, seeds=range(64), seed=2024, threads=2)
    mean, error = momentum_dispersion_empirical(stats)
    expected = momentum_dispersion_integral(cutoff, params)
    assert abs(mean - expected) <= 4.0 * error + 0.01 * expected


@pytest.mark.slow
def test_harmonic_positions_follow_boltzmann(classical_params):
    grid = TimeGrid(dt=0.01, n=16384)
    potential = Harmonic(stiffness=1.0)
    stats = run_ensemble(potential, classical_params, grid, grid.nyquist, seeds=range(32), seed=99)
    _, p_value = boltzmann_chi_square(stats, potential, classical_params)
    assert p_value > 1e-4


@pytest.mark.slow
def test_harmonic_positions_follow_boltzmann_with_quantum_noise():
    params = BathParams(m=1.0, gamma=1.0, T=1.0, hbar=1.0)
    grid = TimeGrid(dt=0.01, n=16384)
    potential = Harmonic(stiffness=1.0)
    stats = run_ensemble(potential, params, grid, solve_cutoff(params).omega, seeds=range(32), seed=7)
    _, p_value = boltzmann_chi_square(stats, potential, params)
    assert p_value > 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("theta", [0.1, 1.0, 5.0])
def test_equipartition_with_solved_cutoff(theta):
    params = BathParams(m=1.0, gamma=1.0, T=1.0, hbar=theta)
    result = solve_cutoff(params)
    assert result.residual < 1e-10
    grid = TimeGrid(dt=0.01, n=8192)
    stats = run_ensemble(Free(), params, grid, result.omega, seeds=range(256), seed=31, threads=4)
    mean, error = momentum_dispersion_empirical(stats)
    assert abs(mean - params.d * params.m * params.T) <= 3.0 * error


@pytest.mark.slow
def test_doubled_cutoff_exceeds_equipartition_by_quadrature():
    params = BathParams(m=1.0, gamma=1.0, T=1.0, hbar=1.0)
    cutoff = 2.0 * solve_cutoff(params).omega
    expected = momentum_dispersion_integral(cutoff, params)
    assert expected > 1.1 * params.m * params.T
    grid = TimeGrid(dt=0.01, n=8192)
    stats = run_ensemble(Free(), params, grid, cutoff, seeds=range(128), seed=5, threads=4)
    mean, error = momentum_dispersion_empirical(stats)
    assert abs(mean - expected) <= 3.0 * error + 0.01 * expected
