"""Зовнішні потенціали U(r) для рівняння Ланжевена та рівнянь Смолуховського і Крамерса.

Положення мають форму (..., d); ``energy`` повертає масив форми (...),
``gradient`` повертає масив тієї ж форми, що й положення.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Mapping

import numpy as np
from scipy import interpolate

from modules.core.errors import ArgumentError, ConfigValidationError
from modules.core.grids import SpaceGrid


class Potential(ABC):
    """Базовий клас потенціалу."""

    kind = "abstract"

    @abstractmethod
    def energy(self, positions: np.ndarray) -> np.ndarray:
        """U(r) для масиву положень (..., d)."""

    @abstractmethod
    def gradient(self, positions: np.ndarray) -> np.ndarray:
        """∂_rU(r) тієї ж форми, що й положення."""

    @abstractmethod
    def max_frequency(self, mass: float) -> float:
        """Оцінка найвищої власної частоти руху в потенціалі для маси ``mass``."""

    def energy_1d(self, r: np.ndarray) -> np.ndarray:
        """U на одновимірній сітці координат."""
        return self.energy(np.asarray(r, dtype=float)[..., np.newaxis])

    def gradient_1d(self, r: np.ndarray) -> np.ndarray:
        """∂_rU на одновимірній сітці координат."""
        return self.gradient(np.asarray(r, dtype=float)[..., np.newaxis])[..., 0]

    def to_dict(self) -> Dict[str, object]:
        """Опис потенціалу для маніфесту."""
        return {"kind": self.kind}


@dataclass(frozen=True)
class Free(Potential):
    """U ≡ 0."""

    kind = "free"

    def energy(self, positions: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(positions)[:-1])

    def gradient(self, positions: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(positions))

    def max_frequency(self, mass: float) -> float:
        return 0.0


@dataclass(frozen=True)
class Harmonic(Potential):
    """U = k|r - c|²/2."""

    stiffness: float = 1.0
    center: float = 0.0
    kind = "harmonic"

    def energy(self, positions: np.ndarray) -> np.ndarray:
        shifted = np.asarray(positions, dtype=float) - self.center
        return 0.5 * self.stiffness * np.sum(shifted * shifted, axis=-1)

    def gradient(self, positions: np.ndarray) -> np.ndarray:
        return self.stiffness * (np.asarray(positions, dtype=float) - self.center)

    def max_frequency(self, mass: float) -> float:
        return math.sqrt(self.stiffness / mass)

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "stiffness": self.stiffness, "center": self.center}


@dataclass(frozen=True)
class DoubleWell(Potential):
    """U = a|r|⁴ - b|r|² з мінімумами при |r|² = b/(2a)."""

    quartic: float = 1.0
    quadratic: float = 1.0
    kind = "double_well"

    def energy(self, positions: np.ndarray) -> np.ndarray:
        r2 = np.sum(np.asarray(positions, dtype=float) ** 2, axis=-1)
        return self.quartic * r2 * r2 - self.quadratic * r2

    def gradient(self, positions: np.ndarray) -> np.ndarray:
        pos = np.asarray(positions, dtype=float)
        r2 = np.sum(pos * pos, axis=-1, keepdims=True)
        return (4.0 * self.quartic * r2 - 2.0 * self.quadratic) * pos

    def max_frequency(self, mass: float) -> float:
        # кривизна в мінімумі 4b; бар'єр має уявну частоту sqrt(2b/m)
        return math.sqrt(4.0 * abs(self.quadratic) / mass)

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "quartic": self.quartic, "quadratic": self.quadratic}


@dataclass(frozen=True, eq=False)
class Tabulated(Potential):
    """Табличний сепарабельний потенціал U(r) = Σ_c u(r_c) зі сплайн-інтерполяцією.

    ``order``: степінь сплайна (1 або 3). Поза сіткою значення
    екстраполюються поліномом крайнього відрізка.
    """

    grid: SpaceGrid
    values: np.ndarray
    order: int = 3
    kind = "tabulated"
    _spline: interpolate.BSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.points,):
            raise ArgumentError(f"Таблиця має {vals.shape} значень, а сітка {self.grid.points} вузлів")
        if self.order not in (1, 3):
            raise ArgumentError(f"Порядок інтерполяції має бути 1 або 3, отримано {self.order}")
        object.__setattr__(self, "_spline", interpolate.make_interp_spline(self.grid.r, vals, k=self.order))

    def energy(self, positions: np.ndarray) -> np.ndarray:
        return np.sum(self._spline(np.asarray(positions, dtype=float)), axis=-1)

    def gradient(self, positions: np.ndarray) -> np.ndarray:
        return self._spline.derivative()(np.asarray(positions, dtype=float))

    def max_frequency(self, mass: float) -> float:
        if self.order < 2:
            slope = np.diff(self._spline(self.grid.r)) / self.grid.spacing
            curvature = np.max(np.abs(np.diff(slope))) / self.grid.spacing
        else:
            curvature = float(np.max(np.abs(self._spline.derivative(2)(self.grid.r))))
        return math.sqrt(curvature / mass)

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "grid": self.grid.to_dict(), "order": self.order}


def potential_from_config(spec: Mapping[str, object]) -> Potential:
    """Будує потенціал з секції конфігурації ``{"kind": ..., ...}``.

    Табличний потенціал задається списком ``values`` на сітці ``grid``.
    """
    kind = str(spec.get("kind", "free"))
    if kind == "free":
        return Free()
    if kind == "harmonic":
        return Harmonic(float(spec.get("stiffness", 1.0)), float(spec.get("center", 0.0)))
    if kind == "double_well":
        return DoubleWell(float(spec.get("quartic", 1.0)), float(spec.get("quadratic", 1.0)))
    if kind == "tabulated":
        grid_spec = dict(spec.get("grid", {}))  # type: ignore[arg-type]
        grid = SpaceGrid(float(grid_spec["length"]), int(grid_spec["points"]), False)
        return Tabulated(grid, np.asarray(spec["values"], dtype=float), int(spec.get("order", 3)))
    raise ConfigValidationError(f"Невідомий тип потенціалу '{kind}'", "potential.kind")
