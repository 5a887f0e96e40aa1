"""Синтез стаціонарного гаусового шуму із заданим спектром S_FF.

Кожна мода rfft отримує незалежну комплексну гаусову амплітуду з дисперсією
S(ω_k)·Δω/(2π); моди з ω_k > Ω обнуляються, а нульова мода дорівнює нулю,
тож кожна компонента має нульове вибіркове середнє. Траєкторія періодична
з періодом n·dt.

Потік випадкових чисел для реалізації r та компоненти c будується як
``SeedSequence(seed, spawn_key=(r, c))``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from modules.core.errors import ArgumentError, GridResolutionError
from modules.core.grids import TimeGrid
from modules.core.params import BathParams
from modules.noise.spectrum import fdt_spectral_density


# Налаштування логування
logger = logging.getLogger(__name__)

NYQUIST_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class NoiseTrajectory:
    """Реалізація сили Ланжевена.

    Attributes:
        samples: Масив форми (n, d).
        grid: Часова сітка.
        cutoff: Частота обрізання Ω.
        seed: Базове зерно.
        params: Параметри, з якими синтезовано шум.
        realization: Індекс реалізації в потоці зерна.
    """

    samples: np.ndarray
    grid: TimeGrid
    cutoff: float
    seed: int
    params: BathParams
    realization: int = 0

    @property
    def components(self) -> int:
        return int(self.samples.shape[1])

    def header(self) -> Dict[str, object]:
        """Метадані для CSV-заголовка."""
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "realization": self.realization,
            "cutoff": self.cutoff,
            "grid": self.grid.to_dict(),
        }


def component_rng(seed: int, realization: int, component: int) -> np.random.Generator:
    """Незалежний генератор для пари (реалізація, компонента)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(realization, component)))


def mode_amplitudes(grid: TimeGrid, spectrum: np.ndarray) -> np.ndarray:
    """Стандартні відхилення амплітуд rfft-мод: sqrt(S_k·Δω/(2π)), нульова мода 0."""
    scale = np.sqrt(np.maximum(spectrum, 0.0) * grid.domega / (2.0 * math.pi))
    scale[0] = 0.0
    return scale


def _check_grid(grid: TimeGrid, cutoff: float) -> None:
    if grid.n % 2:
        raise ArgumentError(f"Синтез вимагає парного n, отримано {grid.n}")
    if cutoff < 0:
        raise ArgumentError(f"Частота обрізання має бути невід'ємною, отримано {cutoff}")
    if cutoff > grid.nyquist * (1.0 + NYQUIST_TOLERANCE):
        raise GridResolutionError(
            f"Частота обрізання Ω={cutoff:.6g} перевищує частоту Найквіста {grid.nyquist:.6g}", math.pi / cutoff
        )


def synthesize(
    grid: TimeGrid,
    spectrum: Callable[[np.ndarray], np.ndarray],
    cutoff: float,
    seed: int,
    components: int,
    realization: int = 0,
) -> np.ndarray:
    """Синтезує (n, components) відліків процесу з двобічним спектром ``spectrum``."""
    _check_grid(grid, cutoff)
    omega = grid.omega_rfft
    target = np.asarray(spectrum(omega), dtype=float)
    target = np.where(omega <= cutoff, target, 0.0)
    scale = mode_amplitudes(grid, target)
    nyquist = grid.n // 2
    out = np.empty((grid.n, components))
    for c in range(components):
        rng = component_rng(seed, realization, c)
        gauss = rng.standard_normal((2, omega.size))
        modes = scale * (gauss[0] + 1j * gauss[1]) / math.sqrt(2.0)
        modes[nyquist] = scale[nyquist] * gauss[0, nyquist]
        out[:, c] = np.fft.irfft(grid.n * modes, n=grid.n)
    return out


def sample_noise(
    grid: TimeGrid,
    params: BathParams,
    cutoff: float,
    seed: int,
    component_count: Optional[int] = None,
    realization: int = 0,
) -> NoiseTrajectory:
    """Генерує траєкторію сили з квантовим ФДТ-спектром, обрізаним на Ω.

    Args:
        grid: Часова сітка з парним n.
        params: Параметри термостата.
        cutoff: Частота обрізання Ω <= π/dt.
        seed: Базове 64-бітне зерно.
        component_count: Кількість компонент; за замовчуванням ``params.d``.
        realization: Індекс реалізації.

    Returns:
        Детермінована для (seed, grid, params, Ω, realization) траєкторія.

    Raises:
        GridResolutionError: Якщо Ω вища за частоту Найквіста.
    """
    d = params.d if component_count is None else component_count
    samples = synthesize(grid, lambda w: fdt_spectral_density(w, params), cutoff, seed, d, realization)
    logger.debug(f"Синтезовано шум: seed={seed}, реалізація={realization}, Ω={cutoff:.6g}, n={grid.n}")
    return NoiseTrajectory(samples, grid, float(cutoff), int(seed), params, realization)


def sample_noise_batch(
    grid: TimeGrid,
    params: BathParams,
    cutoff: float,
    seed: int,
    realizations: List[int],
    component_count: Optional[int] = None,
    threads: int = 1,
) -> List[NoiseTrajectory]:
    """Синтезує кілька реалізацій паралельно; порядок результату відповідає ``realizations``."""
    if threads <= 1:
        return [sample_noise(grid, params, cutoff, seed, component_count, r) for r in realizations]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: sample_noise(grid, params, cutoff, seed, component_count, r), realizations))
