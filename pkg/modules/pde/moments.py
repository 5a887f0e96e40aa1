"""Гідродинамічні моменти фазової густини та нев'язки рівнянь балансу.

ρ = ∫f dp, ρV = ∫p f dp/m, Π = ∫p(p/m - V) f dp.
Нев'язки обчислюються центральними різницями на знімках розв'язувача
(з γ̂ → γ):

    ∂_tρ + ∂_r(ρV) = 0
    m∂_t(ρV) + m∂_r(ρV²) + mγρV + ρ∂_rU + ∂_rΠ = 0

Доданок ρ∂_rU + ∂_rΠ записано як e^{-βU}∂_r(Πe^{βU}) + ∂_rU(ρ - βΠ), тому
для рівноважних знімків він обертається в нуль з точністю до округлення.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from modules.core.errors import ArgumentError
from modules.core.params import BathParams
from modules.langevin.potentials import Potential
from modules.pde.fields import PhaseSpaceField, PhaseSpaceSeries
from modules.pde.flux import face_coordinates


@dataclass(frozen=True, eq=False)
class MomentFields:
    """Густина ρ, потік ρV, швидкість V і тиск Π у вузлах сітки."""

    density: np.ndarray
    flux: np.ndarray
    velocity: np.ndarray
    pressure: np.ndarray
    time: float = 0.0


def extract_moments(f: PhaseSpaceField, mass: float) -> MomentFields:
    """Моменти за квадратурою по центрах комірок імпульсної сітки.

    Там, де ρ = 0, швидкість вважається нульовою.
    """
    dp = f.momentum.spacing
    p = f.momentum.p[:, np.newaxis]
    values = np.asarray(f.values, dtype=float)
    rho = dp * np.sum(values, axis=0)
    flux = dp * np.sum(p * values, axis=0) / mass
    velocity = np.divide(flux, rho, out=np.zeros_like(flux), where=rho > 0)
    pressure = dp * np.sum(p * (p / mass - velocity[np.newaxis, :]) * values, axis=0)
    return MomentFields(rho, flux, velocity, pressure, f.time)


def spatial_derivative(values: np.ndarray, grid) -> np.ndarray:
    """Центральна перша різниця по r (однобічна на кінцях обмеженої сітки)."""
    if grid.periodic:
        return (np.roll(values, -1, axis=-1) - np.roll(values, 1, axis=-1)) / (2.0 * grid.spacing)
    return np.gradient(values, grid.spacing, axis=-1)


def _series_moments(series: PhaseSpaceSeries, mass: float) -> List[MomentFields]:
    if len(series) < 3:
        raise ArgumentError(f"Для похідних за часом потрібно >= 3 знімки, отримано {len(series)}")
    return [extract_moments(series[k], mass) for k in range(len(series))]


def _time_derivative(levels: List[np.ndarray], times: np.ndarray, k: int) -> np.ndarray:
    return (levels[k + 1] - levels[k - 1]) / (times[k + 1] - times[k - 1])


def continuity_residuals(series: PhaseSpaceSeries, mass: float) -> np.ndarray:
    """Поточкові нев'язки ∂_tρ + ∂_r(ρV) для внутрішніх знімків, форма (K-2, M)."""
    moments = _series_moments(series, mass)
    densities = [mf.density for mf in moments]
    times = np.asarray(series.times)
    rows = [
        _time_derivative(densities, times, k) + spatial_derivative(moments[k].flux, series.grid)
        for k in range(1, len(moments) - 1)
    ]
    return np.array(rows)


def residual_continuity(series: PhaseSpaceSeries, mass: float) -> float:
    """Максимум модуля нев'язки рівняння неперервності."""
    return float(np.max(np.abs(continuity_residuals(series, mass))))


def _pressure_force(pressure: np.ndarray, density: np.ndarray, potential: Potential, params: BathParams, grid):
    beta = params.beta
    energy = potential.energy_1d(grid.r)
    shift = float(np.min(energy))
    weighted = pressure * np.exp(beta * (energy - shift))
    e_faces = np.exp(-beta * (potential.energy_1d(face_coordinates(grid)) - shift))
    if grid.periodic:
        face = e_faces * (np.roll(weighted, -1) - weighted) / grid.spacing
        balanced = 0.5 * (face + np.roll(face, 1))
    else:
        face = e_faces * np.diff(weighted) / grid.spacing
        balanced = np.empty_like(weighted)
        balanced[1:-1] = 0.5 * (face[1:] + face[:-1])
        balanced[0] = face[0]
        balanced[-1] = face[-1]
    return balanced + potential.gradient_1d(grid.r) * (density - beta * pressure)


def force_balance_residuals(series: PhaseSpaceSeries, potential: Potential, params: BathParams) -> np.ndarray:
    """Поточкові нев'язки рівняння балансу сил для внутрішніх знімків, форма (K-2, M)."""
    m = params.m
    moments = _series_moments(series, m)
    fluxes = [mf.flux for mf in moments]
    times = np.asarray(series.times)
    grid = series.grid
    rows = []
    for k in range(1, len(moments) - 1):
        mf = moments[k]
        convective = spatial_derivative(mf.flux * mf.velocity, grid)
        rows.append(
            m * _time_derivative(fluxes, times, k)
            + m * convective
            + m * params.gamma * mf.flux
            + _pressure_force(mf.pressure, mf.density, potential, params, grid)
        )
    return np.array(rows)


def residual_force_balance(series: PhaseSpaceSeries, potential: Potential, params: BathParams) -> float:
    """Максимум модуля нев'язки рівняння балансу сил."""
    return float(np.max(np.abs(force_balance_residuals(series, potential, params))))
