"""Фізичні параметри броунівської частинки в квантовому термостаті."""

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import Dict, Mapping

from modules.core.errors import ParameterError


# Налаштування логування
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BathParams:
    """Параметри рівняння Ланжевена з квантовим шумом.

    Внутрішні одиниці мають k_B = 1, тому ``T`` зберігається як енергія.

    Attributes:
        m: Маса частинки, > 0.
        gamma: Швидкість тертя (1/час), > 0.
        tau: Стала радіаційного тертя (час), >= 0.
        T: Температура як теплова енергія, > 0.
        hbar: Стала Планка (дія), >= 0; ``hbar = 0`` дає класичну границю.
        d: Просторова вимірність, 1..3.
    """

    m: float = 1.0
    gamma: float = 1.0
    tau: float = 0.0
    T: float = 1.0
    hbar: float = 0.0
    d: int = 1

    def __post_init__(self) -> None:
        checks = {
            "m": self.m > 0,
            "gamma": self.gamma > 0,
            "tau": self.tau >= 0,
            "T": self.T > 0,
            "hbar": self.hbar >= 0,
        }
        for name, ok in checks.items():
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise ParameterError(f"Недопустиме значення параметра {name}={value!r}")
        if self.d not in (1, 2, 3):
            raise ParameterError(f"Вимірність d має бути 1, 2 або 3, отримано {self.d!r}")

    @property
    def beta(self) -> float:
        """Обернена температура β = 1/T."""
        return 1.0 / self.T

    @property
    def theta(self) -> float:
        """Безрозмірна група θ = βℏγ."""
        return self.hbar * self.gamma / self.T

    @property
    def diffusion(self) -> float:
        """Класичний коефіцієнт дифузії D = T/(mγ)."""
        return self.T / (self.m * self.gamma)

    @property
    def is_classical(self) -> bool:
        """True, якщо ℏ = 0 і τ = 0."""
        return self.hbar == 0.0 and self.tau == 0.0

    def with_(self, **changes: float) -> "BathParams":
        """Повертає копію з оновленими полями."""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, float]:
        """Словник полів для конфігурації та маніфесту."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "BathParams":
        """Створює параметри зі словника, ігноруючи невідомі ключі."""
        known = {k: data[k] for k in ("m", "gamma", "tau", "T", "hbar", "d") if k in data}
        if "d" in known:
            known["d"] = int(known["d"])  # type: ignore[arg-type]
        return cls(**known)  # type: ignore[arg-type]
