"""Фізичні сталі в SI (CODATA 2018)."""

import math
from dataclasses import asdict, dataclass
from typing import Dict


@dataclass(frozen=True)
class ConstantsTable:
    """Таблиця фундаментальних сталих у SI.

    Attributes:
        c: Швидкість світла, м/с (точне значення SI).
        e: Елементарний заряд, Кл (точне значення SI).
        eps0: Електрична стала, Ф/м.
        hbar_SI: Зведена стала Планка, Дж·с (точне значення SI).
        kB_SI: Стала Больцмана, Дж/К (точне значення SI).
        alpha: Стала тонкої структури.
        source: Джерело значень.
    """

    c: float = 299792458.0
    e: float = 1.602176634e-19
    eps0: float = 8.8541878128e-12
    hbar_SI: float = 1.054571817e-34
    kB_SI: float = 1.380649e-23
    alpha: float = 7.2973525693e-3
    source: str = "CODATA 2018"

    def alpha_from_definition(self) -> float:
        """Повертає e²/(4π·ε₀·ℏ·c)."""
        return self.e**2 / (4.0 * math.pi * self.eps0 * self.hbar_SI * self.c)

    def radiation_time(self, mass: float) -> float:
        """Стала радіаційного тертя τ = e²/(6π·ε₀·m·c³) для заряду e і маси ``mass`` (кг)."""
        return self.e**2 / (6.0 * math.pi * self.eps0 * mass * self.c**3)

    def kelvin_to_energy(self, kelvin: float) -> float:
        """Переводить температуру в кельвінах у теплову енергію k_B·T, Дж."""
        return self.kB_SI * kelvin

    def energy_to_kelvin(self, energy: float) -> float:
        """Переводить теплову енергію, Дж, у кельвіни."""
        return energy / self.kB_SI

    def to_dict(self) -> Dict[str, object]:
        """Словник для маніфесту та CSV."""
        return asdict(self)


_TABLE = ConstantsTable()


def constants() -> ConstantsTable:
    """Повертає незмінну таблицю сталих CODATA 2018."""
    return _TABLE
