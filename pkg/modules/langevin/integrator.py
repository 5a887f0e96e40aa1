"""Інтегрування рівняння Ланжевена mR̈ + mγṘ = -∂_RU + F методом Гойна.

Кольоровий шум синтезується заздалегідь і розглядається як відома гладка
сила, задана на сітці. Радіаційний член τ R⃛ у часовій області не
інтегрується: він входить лише у спектральний аналіз та PDE.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from modules.core.errors import ArgumentError, StepSizeError
from modules.core.grids import TimeGrid
from modules.core.params import BathParams
from modules.langevin.potentials import Potential
from modules.noise.synthesis import NoiseTrajectory


# Налаштування логування
logger = logging.getLogger(__name__)

# Межі стійкості: γ·dt та ω_U·dt.
FRICTION_STEP_BOUND = 0.1
POTENTIAL_STEP_BOUND = 0.2


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Розв'язок рівняння руху.

    Attributes:
        times: Моменти часу (n,).
        positions: Положення R(t), форма (n, d) або (n, B, d) для пакета.
        momenta: Імпульси P(t) = mṘ тієї ж форми.
    """

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray

    def __post_init__(self) -> None:
        if self.positions.shape != self.momenta.shape or self.positions.shape[0] != self.times.size:
            raise ArgumentError("Розміри часу, положень та імпульсів не узгоджені")


def check_step(potential: Potential, mass: float, gamma: float, dt: float) -> None:
    """Перевіряє межі стійкості γ·dt < 0.1 і ω_U·dt < 0.2.

    Raises:
        StepSizeError: З рекомендованим dt, якщо межу порушено.
    """
    omega = potential.max_frequency(mass)
    limits = [FRICTION_STEP_BOUND / gamma if gamma > 0 else math.inf]
    limits.append(POTENTIAL_STEP_BOUND / omega if omega > 0 else math.inf)
    bound = min(limits)
    if dt >= bound:
        raise StepSizeError(
            f"Крок dt={dt:.6g} порушує межу стійкості (γ·dt < {FRICTION_STEP_BOUND}, ω·dt < {POTENTIAL_STEP_BOUND})",
            0.5 * bound,
        )


def integrate_forcing(
    potential: Potential,
    mass: float,
    gamma: float,
    dt: float,
    forcing: np.ndarray,
    initial: Tuple[np.ndarray, np.ndarray],
    t0: float = 0.0,
    check_stability: bool = True,
) -> Trajectory:
    """Схема предиктор-коректор Гойна для заданої сили на сітці.

    Args:
        potential: Зовнішній потенціал.
        mass: Маса.
        gamma: Швидкість тертя, >= 0.
        dt: Крок часу.
        forcing: Сила F(t_j) форми (n, d) або (n, B, d).
        initial: Початкові (R0, P0) форми forcing.shape[1:].
        t0: Початковий момент часу.
        check_stability: Чи перевіряти межі кроку.

    Returns:
        Траєкторія довжиною n.
    """
    force = np.asarray(forcing, dtype=float)
    if force.ndim < 2:
        raise ArgumentError(f"Сила має мати форму (n, d) або (n, B, d), отримано {force.shape}")
    if check_stability:
        check_step(potential, mass, gamma, dt)
    n = force.shape[0]
    r = np.broadcast_to(np.asarray(initial[0], dtype=float), force.shape[1:]).copy()
    p = np.broadcast_to(np.asarray(initial[1], dtype=float), force.shape[1:]).copy()
    positions = np.empty_like(force)
    momenta = np.empty_like(force)
    positions[0] = r
    momenta[0] = p
    half = 0.5 * dt
    inv_m = 1.0 / mass
    rate = -gamma * p - potential.gradient(r) + force[0]
    for j in range(n - 1):
        r_pred = r + dt * inv_m * p
        p_pred = p + dt * rate
        rate_pred = -gamma * p_pred - potential.gradient(r_pred) + force[j + 1]
        r = r + half * inv_m * (p + p_pred)
        p = p + half * (rate + rate_pred)
        positions[j + 1] = r
        momenta[j + 1] = p
        rate = -gamma * p - potential.gradient(r) + force[j + 1]
    times = t0 + dt * np.arange(n)
    return Trajectory(times, positions, momenta)


def integrate(
    potential: Potential,
    params: BathParams,
    grid: TimeGrid,
    noise: Optional[NoiseTrajectory],
    initial: Tuple[Sequence[float], Sequence[float]],
) -> Trajectory:
    """Розв'язує рівняння Ланжевена з попередньо синтезованим шумом.

    ``noise=None`` означає нульову силу. Довжина інтегрування дорівнює
    періоду синтезу шуму, тож довші прогони неможливі за побудовою.

    Raises:
        ArgumentError: Сітка шуму відрізняється від сітки інтегрування.
        StepSizeError: Порушено межі стійкості кроку.
    """
    if noise is None:
        forcing = np.zeros((grid.n, params.d))
    else:
        if noise.grid != grid:
            raise ArgumentError("Сітка шуму не збігається з сіткою інтегрування")
        forcing = noise.samples
    logger.debug(f"Інтегрування Ланжевена: n={grid.n}, dt={grid.dt:.6g}, потенціал={potential.kind}")
    return integrate_forcing(potential, params.m, params.gamma, grid.dt, forcing, initial, t0=grid.t0)
