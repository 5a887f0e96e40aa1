"""Квантовий потенціал Бома Q = -ℏ²(∂_r²√ρ)/(2m√ρ) на просторовій сітці."""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from modules.core.errors import DegenerateDensityError
from modules.core.grids import SpaceGrid
from modules.core.params import BathParams


if TYPE_CHECKING:
    from modules.pde.fields import DensityField

# Налаштування логування
logger = logging.getLogger(__name__)

# Відносний поріг густини, нижче якого Q вважається сингулярним.
DENSITY_FLOOR = 1e-12


@dataclass(frozen=True)
class QuantumPotentialField:
    """Значення Q у вузлах сітки (одиниці енергії)."""

    values: np.ndarray
    grid: SpaceGrid


def second_difference(values: np.ndarray, grid: SpaceGrid) -> np.ndarray:
    """Центральна друга різниця; на обмеженій сітці кінці беруться однобічно."""
    f = np.asarray(values, dtype=float)
    h2 = grid.spacing**2
    if grid.periodic:
        return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / h2
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h2
    return out


def fourth_difference(values: np.ndarray, grid: SpaceGrid) -> np.ndarray:
    """П'ятиточкова четверта різниця δ²(δ²f) на періодичній сітці."""
    f = np.asarray(values, dtype=float)
    h4 = grid.spacing**4
    return (np.roll(f, -2) - 4.0 * np.roll(f, -1) + 6.0 * f - 4.0 * np.roll(f, 1) + np.roll(f, 2)) / h4


def _check_density(rho: np.ndarray) -> None:
    peak = float(np.max(rho))
    bad = np.flatnonzero(~(rho >= DENSITY_FLOOR * peak)) if peak > 0 else np.array([0])
    if bad.size:
        cell = int(bad[0])
        raise DegenerateDensityError(f"Густина {rho[cell]:.3e} нижче порогу {DENSITY_FLOOR:g}·max(ρ)", cell)


def _density_values(rho: Union["DensityField", np.ndarray]) -> np.ndarray:
    return np.asarray(getattr(rho, "values", rho), dtype=float)


def bohm_potential(rho: "DensityField", params: BathParams) -> QuantumPotentialField:
    """Обчислює потенціал Бома для густини на сітці.

    Args:
        rho: Поле густини з атрибутами ``values`` та ``grid``.
        params: Параметри (використовуються ℏ та m).

    Returns:
        Поле Q; тотожний нуль при ℏ = 0.

    Raises:
        DegenerateDensityError: Якщо ρ < 1e-12·max(ρ) у якійсь комірці.
    """
    values = _density_values(rho)
    _check_density(values)
    if params.hbar == 0.0:
        return QuantumPotentialField(np.zeros_like(values), rho.grid)
    root = np.sqrt(values)
    q = -(params.hbar**2) / (2.0 * params.m) * second_difference(root, rho.grid) / root
    return QuantumPotentialField(q, rho.grid)


def bohm_flux_divergence(rho: "DensityField", params: BathParams) -> np.ndarray:
    """Дивергенція ∂_r(ρ∂_rQ) у консервативній формі з потоками на гранях.

    На обмеженій сітці потоки на зовнішніх гранях дорівнюють нулю.
    """
    values = _density_values(rho)
    grid = rho.grid
    if params.hbar == 0.0:
        return np.zeros_like(values)
    q = bohm_potential(rho, params).values
    h = grid.spacing
    if grid.periodic:
        face = 0.5 * (values + np.roll(values, -1)) * (np.roll(q, -1) - q) / h
        return (face - np.roll(face, 1)) / h
    face = np.zeros(values.size + 1)
    face[1:-1] = 0.5 * (values[:-1] + values[1:]) * (q[1:] - q[:-1]) / h
    return (face[1:] - face[:-1]) / grid.weights


def linearized_bohm_term(rho: "DensityField", params: BathParams) -> np.ndarray:
    """Лінеаризований член Бома -ℏ²∂_r⁴ρ/(4m) (п'ятиточкова схема, періодична сітка)."""
    values = _density_values(rho)
    return -(params.hbar**2) / (4.0 * params.m) * fourth_difference(values, rho.grid)
