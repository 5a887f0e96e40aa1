"""Поля густини ρ(r) та фазової густини f(p, r) і їхні часові ряди."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from modules.core.errors import ArgumentError, ParameterError
from modules.core.grids import SpaceGrid
from modules.core.params import BathParams
from modules.langevin.potentials import Potential


# Мінімальна межа імпульсної сітки в одиницях sqrt(mT).
MIN_MOMENTUM_EXTENT = 6.0


@dataclass(frozen=True, eq=False)
class DensityField:
    """Густина ймовірності у вузлах просторової сітки."""

    values: np.ndarray
    grid: SpaceGrid
    time: float = 0.0

    def __post_init__(self) -> None:
        if np.shape(self.values) != (self.grid.points,):
            raise ArgumentError(f"Поле має форму {np.shape(self.values)}, а сітка {self.grid.points} вузлів")

    @property
    def mass(self) -> float:
        """∫ρ dr."""
        return float(self.grid.integrate(self.values))

    def normalized(self) -> "DensityField":
        """Копія з ∫ρ dr = 1."""
        return DensityField(np.asarray(self.values) / self.mass, self.grid, self.time)


@dataclass(frozen=True)
class MomentumGrid:
    """Центри комірок p_j = -p_max + (j + 1/2)·Δp, j = 0..points-1."""

    p_max: float
    points: int

    def __post_init__(self) -> None:
        if self.p_max <= 0 or self.points < 4:
            raise ParameterError(f"Недопустима імпульсна сітка p_max={self.p_max}, points={self.points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.p_max / self.points

    @property
    def p(self) -> np.ndarray:
        return -self.p_max + self.spacing * (np.arange(self.points) + 0.5)

    @property
    def faces(self) -> np.ndarray:
        """Межі комірок, включно із зовнішніми ±p_max."""
        return -self.p_max + self.spacing * np.arange(self.points + 1)

    def check_extent(self, params: BathParams) -> None:
        """Вимагає p_max >= 6·sqrt(mT)."""
        required = MIN_MOMENTUM_EXTENT * math.sqrt(params.m * params.T)
        if self.p_max < required:
            raise ParameterError(f"p_max={self.p_max:.6g} менше за 6·sqrt(mT)={required:.6g}")

    def to_dict(self) -> Dict[str, float]:
        return {"p_max": self.p_max, "points": self.points}


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Фазова густина f(p_j, r_i), форма масиву (points_p, points_r)."""

    values: np.ndarray
    momentum: MomentumGrid
    grid: SpaceGrid
    time: float = 0.0

    def __post_init__(self) -> None:
        if np.shape(self.values) != (self.momentum.points, self.grid.points):
            raise ArgumentError(
                f"Поле має форму {np.shape(self.values)}, очікується {(self.momentum.points, self.grid.points)}"
            )

    def density(self) -> DensityField:
        """Маргінальна густина ρ = ∫f dp."""
        return DensityField(self.momentum.spacing * np.sum(self.values, axis=0), self.grid, self.time)

    @property
    def mass(self) -> float:
        """∬ f dp dr."""
        return self.density().mass


@dataclass(frozen=True, eq=False)
class DensitySeries:
    """Часовий ряд густин з діагностикою розв'язувача."""

    times: np.ndarray
    values: np.ndarray
    grid: SpaceGrid
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.times.size)

    def __getitem__(self, index: int) -> DensityField:
        return DensityField(self.values[index], self.grid, float(self.times[index]))

    @property
    def final(self) -> DensityField:
        return self[len(self) - 1]

    @property
    def fields(self) -> List[DensityField]:
        return [self[k] for k in range(len(self))]


@dataclass(frozen=True, eq=False)
class PhaseSpaceSeries:
    """Часовий ряд фазових густин з діагностикою розв'язувача."""

    times: np.ndarray
    values: np.ndarray
    momentum: MomentumGrid
    grid: SpaceGrid
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.times.size)

    def __getitem__(self, index: int) -> PhaseSpaceField:
        return PhaseSpaceField(self.values[index], self.momentum, self.grid, float(self.times[index]))

    @property
    def final(self) -> PhaseSpaceField:
        return self[len(self) - 1]

    def densities(self) -> DensitySeries:
        """Маргінальні густини всіх знімків."""
        rho = self.momentum.spacing * np.sum(self.values, axis=1)
        return DensitySeries(self.times.copy(), rho, self.grid, dict(self.diagnostics))


def boltzmann_density(potential: Potential, params: BathParams, grid: SpaceGrid) -> DensityField:
    """Нормована густина Больцмана exp(-βU) у вузлах сітки."""
    energy = potential.energy_1d(grid.r)
    weights = np.exp(-params.beta * (energy - np.min(energy)))
    return DensityField(weights, grid).normalized()


def maxwell_boltzmann(
    potential: Potential,
    params: BathParams,
    grid: SpaceGrid,
    momentum: MomentumGrid,
    shift: float = 0.0,
    density: Optional[np.ndarray] = None,
) -> PhaseSpaceField:
    """Дискретний розподіл Максвелла-Больцмана exp(-β(p²/2m + U)), нормований на сітці.

    ``shift`` зсуває розподіл за імпульсом, ``density`` замінює exp(-βU)
    довільним просторовим профілем (локальна рівновага).
    """
    p = momentum.p
    kinetic = np.exp(-params.beta * (p - shift) ** 2 / (2.0 * params.m))
    if density is None:
        spatial = boltzmann_density(potential, params, grid).values
    else:
        spatial = np.asarray(density, dtype=float)
    values = kinetic[:, np.newaxis] * spatial[np.newaxis, :]
    f = PhaseSpaceField(values, momentum, grid)
    return PhaseSpaceField(values / f.mass, momentum, grid)
