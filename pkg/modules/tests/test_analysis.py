import math

import numpy as np
import pytest

from modules.analysis import (
    classical_reduction_temperature,
    collision_cutoff,
    collision_friction,
    cutoff_estimate,
    cutoff_residual,
    dispersion_q2,
    momentum_dispersion_integral,
    solve_cutoff,
    universal_TD,
    weak_coupling_cutoff,
)
from modules.analysis.dispersion import quadratic_residual
from modules.core import ArgumentError, BathParams, DomainError, constants


def test_momentum_dispersion_classical_equipartition():
    for d in (1, 3):
        params = BathParams(m=2.0, gamma=0.5, T=1.5, d=d)
        assert momentum_dispersion_integral(math.inf, params) == pytest.approx(d * 3.0)
    params = BathParams()
    assert momentum_dispersion_integral(1.0, params) == pytest.approx(0.5)
    assert momentum_dispersion_integral(0.0, params) == 0.0
    with pytest.raises(ArgumentError):
        momentum_dispersion_integral(-1.0, params)


def test_momentum_dispersion_quantum_exceeds_classical(quantum_params):
    classical = quantum_params.with_(hbar=0.0)
    values = [momentum_dispersion_integral(w, quantum_params) for w in (1.0, 10.0, 100.0)]
    assert values[0] < values[1] < values[2]
    assert values[1] > momentum_dispersion_integral(10.0, classical)
    assert momentum_dispersion_integral(math.inf, quantum_params) == math.inf


@pytest.mark.parametrize("theta", [1.0, 2.0, 5.0, 10.0])
def test_cutoff_close_to_geometric_mean(theta):
    params = BathParams(m=1.0, gamma=theta, T=1.0, hbar=1.0)
    result = solve_cutoff(params)
    assert result.residual < 1e-10
    assert 0.5 <= result.ratio <= 2.0
    assert abs(cutoff_residual(result.omega, params)) < 1e-9
    assert result.bracket[0] < result.omega < result.bracket[1]


def test_cutoff_weak_coupling_scales_with_matsubara_frequency():
    params = BathParams(m=1.0, gamma=0.01, T=1.0, hbar=1.0)
    result = solve_cutoff(params)
    assert 3.3 <= result.omega * params.hbar / params.T <= 3.9
    assert result.to_dict()["ratio"] == pytest.approx(result.ratio)


@pytest.mark.parametrize("quantity", ["hbar", "T"])
def test_cutoff_is_monotone_in_hbar_and_temperature(quantity):
    values = [0.25, 0.5, 1.0, 2.0, 4.0]
    omegas = [solve_cutoff(BathParams(hbar=1.0).with_(**{quantity: value})).omega for value in values]
    if quantity == "hbar":
        # Ω зростає, коли ℏ спадає
        assert np.all(np.diff(omegas) < 0.0)
    else:
        # Ω спадає разом із T
        assert np.all(np.diff(omegas) > 0.0)


def test_weak_coupling_cutoff_explains_large_ratio():
    params = BathParams(m=1.0, gamma=0.01, T=1.0, hbar=1.0)
    result = solve_cutoff(params)
    limit = weak_coupling_cutoff(params)
    assert 3.45 <= limit * params.hbar / params.T <= 3.7
    assert result.omega == pytest.approx(limit, rel=0.02)
    # θ = 0.01: відношення до середнього геометричного ≈ 14, поза [0.5, 2]
    assert result.ratio == pytest.approx(limit / cutoff_estimate(params), rel=0.02)
    assert result.ratio > 10.0
    with pytest.raises(DomainError):
        weak_coupling_cutoff(params.with_(hbar=0.0))


def test_cutoff_residual_is_increasing(quantum_params):
    estimate = cutoff_estimate(quantum_params)
    grid = estimate * np.array([0.1, 0.5, 1.0, 2.0, 10.0])
    residuals = [cutoff_residual(w, quantum_params) for w in grid]
    assert np.all(np.diff(residuals) > 0.0)


def test_cutoff_requires_quantum_bath(classical_params):
    with pytest.raises(DomainError):
        solve_cutoff(classical_params)


def test_collision_cutoff_matches_estimate():
    params = BathParams(m=2.0, T=0.5, hbar=0.3)
    mean_free_path = 1.7
    gamma = collision_friction(mean_free_path, params)
    assert cutoff_estimate(params.with_(gamma=gamma)) == pytest.approx(collision_cutoff(mean_free_path, params))
    with pytest.raises(DomainError):
        collision_cutoff(0.0, params)


def test_classical_dispersion_is_diffusive(classical_params):
    params = classical_params.with_(tau=0.1)
    solution = dispersion_q2(2.0, params)
    assert solution.q2 == pytest.approx(1j * 2.0 * (1.0 + 0.4))
    assert solution.q2_alternative is None
    assert solution.residual < 1e-14
    assert math.isnan(solution.to_row()["re_q2_alt"])


def test_dispersion_removable_point(quantum_params):
    solution = dispersion_q2(0.0, quantum_params)
    assert solution.removable
    assert solution.q2 == 0j
    assert solution.q2_alternative == pytest.approx(-4.0)


@pytest.mark.parametrize("omega", np.logspace(-3, 3, 13))
def test_dispersion_roots_satisfy_quadratic(omega):
    params = BathParams(m=1.0, gamma=1.0, tau=0.01, T=1.0, hbar=0.5)
    solution = dispersion_q2(float(omega), params)
    assert solution.residual < 1e-10
    assert quadratic_residual(solution.q2_alternative, float(omega), params) < 1e-10
    a = (params.hbar / (2.0 * params.m)) ** 2
    c = -1j * omega * (params.gamma + params.tau * omega**2)
    assert solution.q2 * solution.q2_alternative == pytest.approx(c / a, rel=1e-10)
    assert solution.q.real >= 0.0


def test_dispersion_small_frequency_branch(quantum_params):
    solution = dispersion_q2(1e-6, quantum_params)
    assert abs(solution.q2) < 1e-5
    mirrored = dispersion_q2(-1e-6, quantum_params)
    assert mirrored.q2 == pytest.approx(np.conj(solution.q2_alternative))


@pytest.mark.parametrize("params", [BathParams(), BathParams(m=2.0, gamma=0.5, T=1.5, hbar=0.7)])
def test_dispersion_low_frequency_is_classical_diffusion(params):
    omega = 1e-3 * params.gamma
    solution = dispersion_q2(omega, params)
    expected = 1j * omega * params.m * params.gamma / params.T
    assert abs(solution.q2 - expected) < 0.01 * abs(expected)


@pytest.mark.parametrize("params", [BathParams(), BathParams(m=2.0, gamma=0.5, T=1.5, hbar=0.7)])
def test_dispersion_high_frequency_saturates(params):
    expected = 2j * params.m * params.gamma / params.hbar
    for omega in (1e4, 1e6):
        solution = dispersion_q2(omega * params.gamma, params)
        assert abs(solution.q2 - expected) < 0.01 * abs(expected)


def test_special_temperature():
    params = BathParams(tau=0.01, T=1.0, hbar=math.sqrt(0.12))
    assert classical_reduction_temperature(params) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        classical_reduction_temperature(params.with_(tau=0.0))
    with pytest.raises(DomainError):
        classical_reduction_temperature(params.with_(hbar=0.0))


@pytest.mark.parametrize("mass, gamma", [(9.1093837015e-31, 1e12), (1.67262192e-27, 3e9), (1e-25, 1.0)])
def test_universal_product_independent_of_particle(mass, gamma):
    result = universal_TD(BathParams(m=mass, gamma=gamma))
    table = constants()
    reference = table.hbar_SI * table.c**2 / (8.0 * table.kB_SI * table.alpha)
    assert result.deviation < 1e-12
    assert result.product == pytest.approx(reference, rel=1e-9)
    assert result.tau == pytest.approx(table.radiation_time(mass))
    assert result.to_dict()["temperature"] == result.temperature
