"""Ансамблеві прогони рівняння Ланжевена та блокове усереднення статистики."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as sp_integrate, stats as sp_stats

from modules.core.errors import ArgumentError
from modules.core.grids import TimeGrid
from modules.core.params import BathParams
from modules.langevin.integrator import check_step, integrate_forcing
from modules.langevin.potentials import Harmonic, Potential
from modules.noise.synthesis import sample_noise


# Налаштування логування
logger = logging.getLogger(__name__)

DEFAULT_BLOCKS = 32
DEFAULT_CHUNK = 32
MIN_BURN_IN = 5.0  # в одиницях 1/γ
DEFAULT_BURN_IN = 10.0


@dataclass(frozen=True)
class ObservableStats:
    """Середнє спостережуваної з похибкою за блоками.

    ``dispersion``: вибіркова дисперсія блокових середніх.
    """

    name: str
    mean: float
    dispersion: float
    standard_error: float
    block_count: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "mean": self.mean,
            "dispersion": self.dispersion,
            "standard_error": self.standard_error,
            "block_count": self.block_count,
        }


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Статистика ансамблю реалізацій після відкидання перехідного процесу."""

    observables: Dict[str, ObservableStats]
    realization_count: int
    burn_in: float
    cutoff: float
    params: BathParams
    potential: Dict[str, object]
    position_samples: np.ndarray
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        """JSON-запис статистики (без сирих вибірок)."""
        return {
            "observables": {k: v.to_dict() for k, v in self.observables.items()},
            "realization_count": self.realization_count,
            "burn_in": self.burn_in,
            "cutoff": self.cutoff,
            "params": self.params.to_dict(),
            "potential": self.potential,
            "histogram": {"edges": self.histogram_edges.tolist(), "counts": self.histogram_counts.tolist()},
            "warnings": list(self.warnings),
        }


def block_means(series: np.ndarray, blocks: int) -> np.ndarray:
    """Середні по ``blocks`` рівних суміжних блоках уздовж осі 0 (хвіст відкидається)."""
    length = series.shape[0] // blocks
    if length < 1:
        raise ArgumentError(f"Ряд довжиною {series.shape[0]} не ділиться на {blocks} блоків")
    trimmed = series[: length * blocks]
    return trimmed.reshape((blocks, length) + series.shape[1:]).mean(axis=1)


def _summarize(name: str, means: np.ndarray) -> ObservableStats:
    flat = np.asarray(means, dtype=float).ravel()
    dispersion = float(np.var(flat, ddof=1)) if flat.size > 1 else 0.0
    return ObservableStats(name, float(np.mean(flat)), dispersion, math.sqrt(dispersion / flat.size), int(flat.size))


def _run_chunk(
    potential: Potential,
    params: BathParams,
    grid: TimeGrid,
    cutoff: float,
    seed: int,
    realizations: Sequence[int],
    start: int,
    stride: int,
    blocks: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    forcing = np.stack([sample_noise(grid, params, cutoff, seed, realization=r).samples for r in realizations], axis=1)
    zeros = np.zeros(forcing.shape[1:])
    traj = integrate_forcing(potential, params.m, params.gamma, grid.dt, forcing, (zeros, zeros), check_stability=False)
    p2 = np.sum(traj.momenta[start:] ** 2, axis=-1)
    r2 = np.sum(traj.positions[start:] ** 2, axis=-1)
    samples = traj.positions[start::stride, :, 0]
    return block_means(p2, blocks), block_means(r2, blocks), samples.T.ravel()


def _histogram_edges(potential: Potential, params: BathParams, samples: np.ndarray, bins: int) -> np.ndarray:
    if isinstance(potential, Harmonic):
        sigma = math.sqrt(params.T / potential.stiffness)
        center = potential.center
    else:
        sigma = float(np.std(samples)) or 1.0
        center = float(np.mean(samples))
    return np.linspace(center - 4.0 * sigma, center + 4.0 * sigma, bins + 1)


def run_ensemble(
    potential: Potential,
    params: BathParams,
    grid: TimeGrid,
    cutoff: float,
    seeds: Sequence[int],
    burn_in: Optional[float] = None,
    seed: int = 0,
    blocks: int = DEFAULT_BLOCKS,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
    histogram_stride: Optional[float] = None,
    histogram_bins: int = 24,
) -> EnsembleStats:
    """Запускає ансамбль реалізацій і збирає статистику з блоковими похибками.

    Args:
        potential: Зовнішній потенціал.
        params: Параметри термостата.
        grid: Часова сітка (одночасно сітка синтезу шуму).
        cutoff: Частота обрізання Ω.
        seeds: Індекси реалізацій у потоці базового зерна ``seed``.
        burn_in: Час відкидання перехідного процесу; за замовчуванням 10/γ.
        seed: Базове зерно.
        blocks: Кількість блоків на реалізацію.
        threads: Кількість потоків для пакетів реалізацій.
        chunk: Кількість реалізацій в одному пакеті.
        histogram_stride: Інтервал часу між відліками гістограми положень; за замовчуванням 10/γ.
        histogram_bins: Кількість бінів гістограми.

    Returns:
        Статистика ансамблю; коротке відкидання записується у ``warnings``.
    """
    realizations = list(seeds)
    if not realizations:
        raise ArgumentError("Потрібна хоча б одна реалізація")
    check_step(potential, params.m, params.gamma, grid.dt)
    warnings: List[str] = []
    burn = DEFAULT_BURN_IN / params.gamma if burn_in is None else float(burn_in)
    if burn < MIN_BURN_IN / params.gamma:
        message = f"Час відкидання {burn:.6g} коротший за 5/γ = {MIN_BURN_IN / params.gamma:.6g}"
        logger.warning(message)
        warnings.append(message)
    start = int(math.ceil(burn / grid.dt))
    if grid.n - start < blocks:
        raise ArgumentError(f"Після відкидання {start} кроків залишилось замало відліків для {blocks} блоків")
    stride = max(1, int(round((DEFAULT_BURN_IN / params.gamma if histogram_stride is None else histogram_stride) / grid.dt)))

    chunks = [realizations[i : i + chunk] for i in range(0, len(realizations), chunk)]
    args = (potential, params, grid, cutoff, seed)
    logger.info(f"Ансамбль: {len(realizations)} реалізацій, {len(chunks)} пакетів, потоків {threads}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _run_chunk(*args, c, start, stride, blocks), chunks))
    else:
        results = [_run_chunk(*args, c, start, stride, blocks) for c in chunks]

    p2 = np.concatenate([res[0] for res in results], axis=1)
    r2 = np.concatenate([res[1] for res in results], axis=1)
    samples = np.concatenate([res[2] for res in results])
    edges = _histogram_edges(potential, params, samples, histogram_bins)
    counts, _ = np.histogram(samples, bins=edges)
    observables = {
        "momentum_dispersion": _summarize("momentum_dispersion", p2),
        "position_dispersion": _summarize("position_dispersion", r2),
    }
    return EnsembleStats(
        observables=observables,
        realization_count=len(realizations),
        burn_in=burn,
        cutoff=float(cutoff),
        params=params,
        potential=potential.to_dict(),
        position_samples=samples,
        histogram_edges=edges,
        histogram_counts=counts,
        warnings=warnings,
    )


def momentum_dispersion_empirical(stats: EnsembleStats) -> Tuple[float, float]:
    """Емпірична ⟨P²⟩ (сума за компонентами) зі стандартною похибкою."""
    obs = stats.observables["momentum_dispersion"]
    return obs.mean, obs.standard_error


def boltzmann_chi_square(stats: EnsembleStats, potential: Potential, params: BathParams) -> Tuple[float, float]:
    """Хі-квадрат гістограми положень проти розподілу Больцмана exp(-βU).

    Очікувані ймовірності бінів інтегруються чисельно і нормуються на
    діапазон гістограми. Повертає (статистика, p-значення).
    """
    edges = stats.histogram_edges
    weight = lambda x: math.exp(-params.beta * float(potential.energy_1d(np.array([x]))[0]))  # noqa: E731
    mass = np.array([sp_integrate.quad(weight, a, b)[0] for a, b in zip(edges[:-1], edges[1:])])
    observed = stats.histogram_counts.astype(float)
    expected = mass / mass.sum() * observed.sum()
    result = sp_stats.chisquare(observed, expected)
    return float(result.statistic), float(result.pvalue)
