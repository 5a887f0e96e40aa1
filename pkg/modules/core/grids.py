"""Рівномірні сітки за часом та простором і домовленість щодо Фур'є.

Часові сигнали розкладаються за e^{-iωt} (∂_t ↔ -iω), просторові хвилі
мають вигляд e^{iqr} (∂_r ↔ iq). Частоти впорядковані так само, як у
``numpy.fft``.
"""

import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from modules.core.errors import ArgumentError, ParameterError


@dataclass(frozen=True)
class TimeGrid:
    """Часова сітка t_j = t0 + j·dt, j = 0..n-1.

    Частотна сітка ω_k = 2πk/(n·dt) для k з напіввідкритого симетричного
    набору [-n/2, n/2).
    """

    t0: float = 0.0
    dt: float = 1e-2
    n: int = 1024

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError(f"Крок часу dt має бути додатним, отримано {self.dt!r}")
        if self.n < 2:
            raise ParameterError(f"Кількість відліків n має бути >= 2, отримано {self.n!r}")

    @property
    def duration(self) -> float:
        """Довжина періоду n·dt."""
        return self.n * self.dt

    @property
    def times(self) -> np.ndarray:
        """Моменти часу сітки."""
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def domega(self) -> float:
        """Крок частотної сітки 2π/(n·dt)."""
        return 2.0 * math.pi / self.duration

    @property
    def nyquist(self) -> float:
        """Частота Найквіста π/dt."""
        return math.pi / self.dt

    @property
    def omega(self) -> np.ndarray:
        """Повна частотна сітка у порядку FFT."""
        return 2.0 * math.pi * np.fft.fftfreq(self.n, d=self.dt)

    @property
    def omega_rfft(self) -> np.ndarray:
        """Невід'ємні частоти для rfft."""
        return 2.0 * math.pi * np.fft.rfftfreq(self.n, d=self.dt)

    def index_range(self) -> range:
        """Симетричний набір індексів [-n/2, n/2)."""
        return range(-(self.n // 2), self.n - self.n // 2)

    def omega_of(self, k: int) -> float:
        """Частота ω_k для індексу k."""
        if k not in self.index_range():
            raise ArgumentError(f"Індекс {k} поза межами частотної сітки")
        return self.domega * k

    def index_of(self, omega: float) -> int:
        """Індекс найближчого вузла частотної сітки."""
        k = int(round(omega / self.domega))
        if k not in self.index_range():
            raise ArgumentError(f"Частота {omega:.6g} поза межами сітки (Найквіст {self.nyquist:.6g})")
        return k

    def to_dict(self) -> Dict[str, float]:
        """Словник полів."""
        return {"t0": self.t0, "dt": self.dt, "n": self.n}


@dataclass(frozen=True)
class SpaceGrid:
    """Рівномірна одновимірна просторова сітка на [-L/2, L/2].

    Для періодичної сітки Δr = L/M і вузли r_i = -L/2 + i·Δr; для
    обмеженої Δr = L/(M-1) і кінці входять у сітку.
    """

    length: float = 10.0
    points: int = 128
    periodic: bool = True

    def __post_init__(self) -> None:
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ParameterError(f"Довжина L має бути додатною, отримано {self.length!r}")
        if self.points < 4:
            raise ParameterError(f"Кількість вузлів M має бути >= 4, отримано {self.points!r}")

    @property
    def spacing(self) -> float:
        """Крок сітки Δr."""
        return self.length / (self.points if self.periodic else self.points - 1)

    @property
    def r(self) -> np.ndarray:
        """Координати вузлів."""
        return -0.5 * self.length + self.spacing * np.arange(self.points)

    @property
    def weights(self) -> np.ndarray:
        """Квадратурні ваги: прямокутники (періодична) або трапеції (обмежена)."""
        w = np.full(self.points, self.spacing)
        if not self.periodic:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def integrate(self, values: np.ndarray, axis: int = -1) -> np.ndarray:
        """Інтеграл по r з квадратурними вагами сітки."""
        return np.tensordot(values, self.weights, axes=([axis], [0]))

    @property
    def wavenumbers(self) -> np.ndarray:
        """Хвильові числа q_k = 2πk/L (лише для періодичної сітки)."""
        if not self.periodic:
            raise ArgumentError("Хвильові числа визначені лише на періодичній сітці")
        return 2.0 * math.pi * np.fft.fftfreq(self.points, d=self.spacing)

    def effective_wavenumber(self, q: float) -> float:
        """Ефективне хвильове число центральної другої різниці: δ²e^{iqr} = -q_h²·e^{iqr}."""
        h = self.spacing
        return math.sqrt(2.0 - 2.0 * math.cos(q * h)) / h

    def to_dict(self) -> Dict[str, object]:
        """Словник полів."""
        return {"length": self.length, "points": self.points, "periodic": self.periodic}
