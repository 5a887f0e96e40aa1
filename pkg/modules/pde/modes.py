"""Точний розв'язок для однієї фур'є-моди вільної частинки та оцінка швидкості згасання.

Підстановка ρ ∝ e^{st}·cos(qr) у mγ(1 - (τ/γ)∂_t²)∂_tρ = T(1 - κ∂_t²)∂_r²ρ,
κ = ℏ²/(12T²), дає кубічне рівняння

    -mτs³ - κTq²s² + mγs + Tq² = 0.

Корені з радіаційного члена є "втікаючими" аналогами; фізичним вважається
корінь, неперервно пов'язаний з класичним s = -Tq²/(mγ) при (κ, τ) → 0.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from modules.core.errors import ArgumentError
from modules.core.params import BathParams
from modules.pde.fields import DensityField, DensitySeries


# Налаштування логування
logger = logging.getLogger(__name__)

HOMOTOPY_STEPS = 16
NEWTON_ITERATIONS = 8

ORDER_CLASSICAL = "classical"
ORDER_SEMICLASSICAL = "semiclassical"


@dataclass(frozen=True, eq=False)
class ModeEvolution:
    """Корені характеристичного полінома для хвильового числа q."""

    q: float
    order: str
    roots: np.ndarray
    physical: complex
    classical: complex
    residual: float
    unstable_roots: List[complex] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        """Чи всі корені мають Re s <= 0."""
        return not self.unstable_roots

    def report(self) -> Dict[str, object]:
        """Опис коренів для маніфесту."""
        return {
            "q": self.q,
            "order": self.order,
            "physical": [self.physical.real, self.physical.imag],
            "classical": [self.classical.real, self.classical.imag],
            "roots": [[r.real, r.imag] for r in self.roots],
            "residual": self.residual,
            "unstable_roots": [[r.real, r.imag] for r in self.unstable_roots],
        }


def mode_polynomial(q: float, params: BathParams, kappa: float, tau: float, bohm: bool = False) -> np.ndarray:
    """Коефіцієнти кубічного полінома за спаданням степенів s."""
    m, T = params.m, params.T
    stiffness = q * q * T
    if bohm:
        stiffness += params.hbar**2 * q**4 / (4.0 * m)
    return np.array([-m * tau, -kappa * T * q * q, m * params.gamma, stiffness], dtype=complex)


def _polish(coefficients: np.ndarray, root: complex) -> complex:
    derivative = np.polyder(coefficients)
    for _ in range(NEWTON_ITERATIONS):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        step = np.polyval(coefficients, root) / slope
        root -= step
        if abs(step) <= 1e-16 * max(1.0, abs(root)):
            break
    return complex(root)


def track_physical_root(coefficients_at: Callable[[float], np.ndarray], start: complex) -> complex:
    """Продовжує корінь від ``start`` при частці поправок 0 до частки 1 і уточнює його.

    ``coefficients_at(f)`` повертає коефіцієнти полінома за спаданням степенів, коли
    поправки (κ, τ) помножено на f.
    """
    current = complex(start)
    for k in range(1, HOMOTOPY_STEPS + 1):
        roots = np.roots(coefficients_at(k / HOMOTOPY_STEPS))
        if roots.size:
            current = complex(roots[np.argmin(np.abs(roots - current))])
    return _polish(np.asarray(coefficients_at(1.0), dtype=complex), current)


def free_mode_evolution(
    q: float, params: BathParams, order: str = ORDER_SEMICLASSICAL, bohm: bool = False
) -> ModeEvolution:
    """Знаходить корені s для моди q і вибирає фізичний гомотопією за (κ, τ).

    Args:
        q: Дійсне хвильове число.
        params: Параметри термостата.
        order: ``"classical"`` (κ = 0) або ``"semiclassical"``.
        bohm: Додати лінеаризований член Бома ℏ²q⁴/(4m) до жорсткості моди.

    Returns:
        ModeEvolution; нестійкі корені перелічуються у ``unstable_roots``,
        а не спричиняють виняток.
    """
    if order not in (ORDER_CLASSICAL, ORDER_SEMICLASSICAL):
        raise ArgumentError(f"Невідомий порядок '{order}'")
    if not np.isfinite(q):
        raise ArgumentError(f"Хвильове число має бути скінченним, отримано {q!r}")
    kappa = params.hbar**2 / (12.0 * params.T**2) if order == ORDER_SEMICLASSICAL else 0.0
    tau = params.tau

    base = mode_polynomial(q, params, 0.0, 0.0, bohm)
    classical = complex(-base[3] / base[2])
    physical = track_physical_root(lambda f: mode_polynomial(q, params, f * kappa, f * tau, bohm), classical)
    coefficients = mode_polynomial(q, params, kappa, tau, bohm)
    roots = np.roots(coefficients) if np.any(coefficients[:-1] != 0) else np.array([physical])
    scale = np.max(np.abs(coefficients)) * max(1.0, abs(physical)) ** 3
    residual = float(abs(np.polyval(coefficients, physical)) / scale)
    unstable = [complex(r) for r in roots if r.real > 1e-12 * max(1.0, abs(r))]
    if unstable:
        logger.warning(f"Мода q={q:.6g}: корені з Re s > 0: {unstable}")
    return ModeEvolution(q, order, roots, physical, classical, residual, unstable)


def single_mode_density(grid, q: float, amplitude: float = 0.1) -> DensityField:
    """Нормована густина (1 + a·cos(qr))/L на періодичній сітці."""
    if not grid.periodic:
        raise ArgumentError("Одномодові початкові дані визначені лише на періодичній сітці")
    values = 1.0 + amplitude * np.cos(q * grid.r)
    return DensityField(values, grid).normalized()


def mode_amplitude(rho: DensityField, q: float) -> float:
    """Проєкція ρ на cos(qr)."""
    return float(rho.grid.integrate(np.asarray(rho.values) * np.cos(q * rho.grid.r)))


def mode_decay_rate(
    series: DensitySeries, q: float, t_min: Optional[float] = None, t_max: Optional[float] = None
) -> float:
    """Швидкість згасання моди q: нахил лінійної апроксимації log|a(t)| на вікні [t_min, t_max]."""
    times = np.asarray(series.times)
    lower = times[0] if t_min is None else t_min
    upper = times[-1] if t_max is None else t_max
    mask = (times >= lower - 1e-12) & (times <= upper + 1e-12)
    if np.count_nonzero(mask) < 2:
        raise ArgumentError(f"Замало знімків у вікні [{lower:.6g}, {upper:.6g}]")
    amplitudes = np.array([abs(mode_amplitude(series[k], q)) for k in np.flatnonzero(mask)])
    slope, _ = np.polyfit(times[mask], np.log(amplitudes), 1)
    return float(slope)
