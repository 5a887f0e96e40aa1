import math

import numpy as np
import pytest
from scipy import stats

from modules.core import ArgumentError, BathParams, GridResolutionError, TimeGrid
from modules.langevin.integrator import integrate
from modules.langevin.potentials import Free
from modules.noise import (
    fdt_spectral_density,
    force_variance,
    momentum_spectral_density,
    periodogram,
    periodogram_samples,
    sample_noise,
    sample_noise_batch,
)


def test_fdt_spectrum_floor_and_parity(quantum_params):
    omega = np.linspace(-30.0, 30.0, 121)
    spectrum = fdt_spectral_density(omega, quantum_params)
    floor = 2.0 * quantum_params.m * quantum_params.gamma * quantum_params.T
    assert fdt_spectral_density(0.0, quantum_params) == pytest.approx(floor)
    assert np.all(spectrum >= floor * (1.0 - 1e-15))
    assert np.allclose(spectrum, spectrum[::-1])
    assert np.all(np.diff(spectrum[60:]) >= 0.0)
    # високочастотна асимптотика mγℏ|ω|
    assert fdt_spectral_density(30.0, quantum_params) == pytest.approx(30.0, rel=1e-9)


def test_momentum_spectrum_free_particle(classical_params):
    assert momentum_spectral_density(1.0, classical_params) == pytest.approx(1.0)


def test_force_variance_classical_closed_form(classical_params):
    assert force_variance(10.0, classical_params) == pytest.approx(2.0 * 10.0 / math.pi, rel=1e-10)
    assert force_variance(0.0, classical_params) == 0.0


def test_sample_noise_is_reproducible(quantum_params, short_time_grid):
    first = sample_noise(short_time_grid, quantum_params, 50.0, seed=11)
    second = sample_noise(short_time_grid, quantum_params, 50.0, seed=11)
    other = sample_noise(short_time_grid, quantum_params, 50.0, seed=11, realization=1)
    assert np.array_equal(first.samples, second.samples)
    assert not np.allclose(first.samples, other.samples)
    assert first.samples.shape == (short_time_grid.n, 1)
    assert abs(float(np.mean(first.samples))) < 1e-12
    assert first.header()["seed"] == 11


def test_sample_noise_components_are_independent_streams(classical_params, short_time_grid):
    trajectory = sample_noise(short_time_grid, classical_params, 100.0, seed=5, component_count=3)
    assert trajectory.components == 3
    correlation = np.corrcoef(trajectory.samples.T)
    assert np.all(np.abs(correlation[np.triu_indices(3, 1)]) < 0.25)


def test_sample_noise_grid_checks(classical_params):
    with pytest.raises(ArgumentError):
        sample_noise(TimeGrid(dt=0.01, n=1023), classical_params, 10.0, seed=0)
    grid = TimeGrid(dt=0.1, n=256)
    with pytest.raises(GridResolutionError) as info:
        sample_noise(grid, classical_params, 2.0 * grid.nyquist, seed=0)
    assert info.value.required_dt == pytest.approx(0.05)


def test_batch_matches_sequential_synthesis(quantum_params, short_time_grid):
    batch = sample_noise_batch(short_time_grid, quantum_params, 40.0, 3, [0, 1, 2], threads=2)
    for realization, trajectory in enumerate(batch):
        single = sample_noise(short_time_grid, quantum_params, 40.0, 3, realization=realization)
        assert np.array_equal(trajectory.samples, single.samples)


def test_flat_spectrum_recovered(classical_params):
    grid = TimeGrid(dt=0.05, n=4096)
    trajectories = sample_noise_batch(grid, classical_params, grid.nyquist, 2024, list(range(16)))
    estimate = periodogram(trajectories, bands=8, reference=lambda w: fdt_spectral_density(w, classical_params))
    assert estimate.realization_count == 16
    assert np.all(np.abs(estimate.ratio - 1.0) < 5.0 * estimate.ratio_standard_error + 1e-3)
    assert estimate.total_power == pytest.approx(force_variance(grid.nyquist, classical_params), rel=0.03)
    rows = estimate.to_rows()
    assert len(rows) == 8 and "ratio_stderr" in rows[0]


def test_quantum_spectrum_shape_recovered(quantum_params):
    grid = TimeGrid(dt=0.05, n=4096)
    trajectories = sample_noise_batch(grid, quantum_params, grid.nyquist, 7, list(range(16)))
    estimate = periodogram(trajectories, bands=8, reference=lambda w: fdt_spectral_density(w, quantum_params))
    assert np.all(np.abs(estimate.ratio - 1.0) < 5.0 * estimate.ratio_standard_error + 1e-3)
    # рівень у верхній смузі помітно вищий за класичний 2mγT
    assert estimate.power[-1] > 10.0 * 2.0


def test_cutoff_removes_high_modes(classical_params):
    grid = TimeGrid(dt=0.05, n=2048)
    trajectory = sample_noise(grid, classical_params, 0.25 * grid.nyquist, 9)
    estimate = periodogram([trajectory], bands=4)
    assert estimate.power[0] > 0.0
    assert np.allclose(estimate.power[1:], 0.0, atol=1e-20)


def test_periodogram_argument_checks(classical_params):
    grid = TimeGrid(dt=0.05, n=256)
    first = sample_noise(grid, classical_params, 10.0, 1)
    second = sample_noise(TimeGrid(dt=0.05, n=512), classical_params, 10.0, 1)
    with pytest.raises(ArgumentError):
        periodogram([], bands=4)
    with pytest.raises(ArgumentError):
        periodogram([first, second], bands=4)
    with pytest.raises(ArgumentError):
        periodogram_samples(first.samples, grid, bands=0)


def test_zero_cutoff_gives_zero_trajectory(quantum_params, short_time_grid):
    trajectory = sample_noise(short_time_grid, quantum_params, 0.0, seed=3, component_count=2)
    assert np.array_equal(trajectory.samples, np.zeros((short_time_grid.n, 2)))


def test_pooled_samples_are_gaussian(classical_params):
    grid = TimeGrid(dt=0.05, n=2**16)
    trajectories = sample_noise_batch(grid, classical_params, grid.nyquist, 404, list(range(16)))
    pooled = np.concatenate([trajectory.samples[:, 0] for trajectory in trajectories])
    assert pooled.size >= 1_000_000
    # стандартна похибка ексцесу гаусової вибірки sqrt(24/N)
    assert abs(stats.kurtosis(pooled)) < 3.0 * math.sqrt(24.0 / pooled.size)
    assert abs(stats.skew(pooled)) < 3.0 * math.sqrt(6.0 / pooled.size)


@pytest.mark.slow
@pytest.mark.parametrize("hbar", [0.0, 1.0])
def test_periodogram_matches_spectrum_within_five_percent(hbar):
    params = BathParams(m=1.0, gamma=1.0, T=1.0, hbar=hbar)
    grid = TimeGrid(dt=0.05, n=2**16)
    cutoff = grid.nyquist if hbar == 0.0 else 0.5 * grid.nyquist
    trajectories = sample_noise_batch(grid, params, cutoff, 2025, list(range(64)), threads=4)
    estimate = periodogram(trajectories, bands=16, reference=lambda w: fdt_spectral_density(w, params))
    below = estimate.band_edges[:, 1] <= cutoff
    assert np.count_nonzero(below) >= 7
    assert np.all(np.abs(estimate.ratio[below] - 1.0) < 0.05)
    if hbar == 0.0:
        assert np.all(np.abs(estimate.power / 2.0 - 1.0) < 0.05)


@pytest.mark.slow
def test_free_particle_momentum_spectrum(quantum_params):
    grid = TimeGrid(dt=0.01, n=16384)
    potential = Free()
    momenta = []
    for realization in range(8):
        noise = sample_noise(grid, quantum_params, grid.nyquist, 77, realization=realization)
        momenta.append(integrate(potential, quantum_params, grid, noise, ([0.0], [0.0])).momenta)
    estimate = periodogram_samples(
        np.stack(momenta), grid, bands=64, reference=lambda w: momentum_spectral_density(w, quantum_params)
    )
    low = estimate.frequencies < 0.1 * grid.nyquist
    assert np.count_nonzero(low) >= 4
    deviation = np.abs(estimate.ratio[low] - 1.0)
    assert np.all(deviation < 4.0 * estimate.ratio_standard_error[low] + 0.02)
