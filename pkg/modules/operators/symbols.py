"""Частотні символи часових операторів: температури T̂ та тертя γ̂.

Оператори діють лише за часом і реалізуються множенням у частотній
області; ядро згортки в часі ніколи не будується.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from modules.core.errors import ArgumentError, ContractViolationError, DomainError
from modules.core.grids import TimeGrid
from modules.core.params import BathParams
from modules.core.special_functions import BERNOULLI_MAX_ORDER, bernoulli_even_float, x_coth


# Налаштування логування
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

SERIES_RADIUS = 2.0 * math.pi
IMAGINARY_TOLERANCE = 1e-12


def _scalar_or_array(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def temperature_symbol(omega: ArrayLike, params: BathParams) -> ArrayLike:
    """Символ оператора температури T·(x/2)·coth(x/2), x = βℏω.

    Значення завжди >= T і дорівнює T при ω = 0 або ℏ = 0.
    """
    x = params.beta * params.hbar * np.asarray(omega, dtype=float)
    return _scalar_or_array(params.T * np.asarray(x_coth(0.5 * x)), omega)


def temperature_symbol_series(omega: ArrayLike, params: BathParams, order: int) -> ArrayLike:
    """Символ T̂ через обрізаний ряд T·Σ B_2n x^{2n}/(2n)!.

    Args:
        omega: Кутова частота (скаляр або масив).
        params: Параметри термостата.
        order: Найвищий індекс n у сумі, 0..30. ``order = 1`` дає T(1 + x²/12).

    Returns:
        Значення ряду.

    Raises:
        DomainError: Якщо |βℏω| >= 2π, де ряд розбігається.
        ArgumentError: Якщо ``order`` поза межами [0, 30].
    """
    if order < 0 or order > BERNOULLI_MAX_ORDER:
        raise ArgumentError(f"Порядок ряду має бути в [0, {BERNOULLI_MAX_ORDER}], отримано {order}")
    x = params.beta * params.hbar * np.asarray(omega, dtype=float)
    if np.any(np.abs(x) >= SERIES_RADIUS):
        worst = float(np.max(np.abs(x)))
        raise DomainError(f"Ряд для T̂ збігається лише при |βℏω| < 2π; отримано |βℏω| = {worst:.6g}")
    coefficients = bernoulli_even_float(order) / np.array([math.factorial(2 * n) for n in range(order + 1)], dtype=float)
    x2 = x * x
    # Горнер по x²
    total = np.zeros_like(x2)
    for c in coefficients[::-1]:
        total = total * x2 + c
    return _scalar_or_array(params.T * total, omega)


def friction_symbol(omega: ArrayLike, params: BathParams) -> ArrayLike:
    """Символ оператора тертя γ̂ = γ - τ∂_t², тобто γ + τω²."""
    w = np.asarray(omega, dtype=float)
    return _scalar_or_array(params.gamma + params.tau * w * w, omega)


def quantum_quantum_temperature_symbol(
    omega: ArrayLike, q: ArrayLike, params: BathParams, semiclassical: bool = False
) -> ArrayLike:
    """Символ T̂ - ℏ²∂_r²/(4m), що поєднує квантовість термостата і частинки.

    Точна форма: T·(x/2)coth(x/2) + ℏ²q²/(4m). Напівкласична:
    T + ℏ²q²/(4m) + ℏ²ω²/(12T).
    """
    w = np.asarray(omega, dtype=float)
    qq = np.asarray(q, dtype=float)
    particle = params.hbar**2 * qq * qq / (4.0 * params.m)
    if semiclassical:
        bath = params.T + params.hbar**2 * w * w / (12.0 * params.T)
    else:
        bath = np.asarray(temperature_symbol(w, params))
    value = bath + particle
    return float(value) if np.ndim(omega) == 0 and np.ndim(q) == 0 else value


class SpectralSymbol(ABC):
    """Множник ω ↦ σ(ω) часового оператора."""

    @abstractmethod
    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        """Значення символу на масиві частот."""

    def __call__(self, omega: ArrayLike) -> np.ndarray:
        return np.asarray(self.evaluate(np.asarray(omega, dtype=float)))

    def __mul__(self, other: "SpectralSymbol") -> "Product":
        left = self.factors if isinstance(self, Product) else (self,)
        right = other.factors if isinstance(other, Product) else (other,)
        return Product(left + right)


@dataclass(frozen=True)
class TemperatureExact(SpectralSymbol):
    """Точний символ T̂."""

    params: BathParams

    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        return np.asarray(temperature_symbol(omega, self.params))


@dataclass(frozen=True)
class TemperatureSeries(SpectralSymbol):
    """Символ T̂, обрізаний до ``order`` членів ряду Бернуллі."""

    params: BathParams
    order: int = 1

    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        return np.asarray(temperature_symbol_series(omega, self.params, self.order))


@dataclass(frozen=True)
class Friction(SpectralSymbol):
    """Символ γ + τω²."""

    gamma: float
    tau: float = 0.0

    @classmethod
    def from_params(cls, params: BathParams) -> "Friction":
        return cls(params.gamma, params.tau)

    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        return self.gamma + self.tau * omega * omega


@dataclass(frozen=True)
class Identity(SpectralSymbol):
    """Одиничний символ."""

    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        return np.ones_like(omega)


@dataclass(frozen=True)
class Product(SpectralSymbol):
    """Поточковий добуток символів-множників."""

    factors: Tuple[SpectralSymbol, ...]

    def evaluate(self, omega: np.ndarray) -> np.ndarray:
        result: np.ndarray = np.ones_like(omega, dtype=complex)
        for factor in self.factors:
            result = result * factor(omega)
        if np.all(result.imag == 0):
            return result.real
        return result


def apply_time_symbol(signal: np.ndarray, symbol: SpectralSymbol, grid: TimeGrid) -> np.ndarray:
    """Застосовує часовий оператор до сигналу на періодичній сітці.

    Символ обчислюється на всій сітці частот; результат є irfft від
    σ(ω_k)·rfft(signal) уздовж осі 0, тому він дійсний і лінійний за входом.

    Raises:
        ArgumentError: Довжина сигналу не збігається з ``grid.n``.
        ContractViolationError: Символ має ненульову уявну частину на сітці.
    """
    data = np.asarray(signal, dtype=float)
    if data.shape[0] != grid.n:
        raise ArgumentError(f"Довжина сигналу {data.shape[0]} не збігається з сіткою n={grid.n}")
    full = np.asarray(symbol(grid.omega))
    scale = max(float(np.max(np.abs(full))), 1.0)
    if np.iscomplexobj(full) and float(np.max(np.abs(full.imag))) > IMAGINARY_TOLERANCE * scale:
        raise ContractViolationError(f"Символ {type(symbol).__name__} має ненульову уявну частину на сітці")
    multiplier = np.real(np.asarray(symbol(grid.omega_rfft)))
    shape = (-1,) + (1,) * (data.ndim - 1)
    spectrum = np.fft.rfft(data, axis=0) * multiplier.reshape(shape)
    return np.fft.irfft(spectrum, n=grid.n, axis=0)
