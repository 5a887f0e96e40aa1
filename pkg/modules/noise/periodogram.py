"""Оцінка спектральної густини потужності за ансамблем траєкторій."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from modules.core.errors import ArgumentError
from modules.core.grids import TimeGrid
from modules.noise.synthesis import NoiseTrajectory


# Налаштування логування
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Смугово усереднена спектральна густина.

    Attributes:
        frequencies: Центри смуг (середня ω бінів смуги).
        power: Середня густина потужності в смузі.
        standard_error: Стандартна похибка середнього в смузі.
        realization_count: Кількість траєкторій у вибірці.
        band_edges: Межі смуг у частотах [ω_min, ω_max] для кожної смуги.
        bin_counts: Кількість бінів rfft у кожній смузі.
        total_power: Середня повна потужність (дисперсія) на компоненту.
        ratio: Середнє P_k/S_ref(ω_k) у смузі, якщо задано еталон.
        ratio_standard_error: Стандартна похибка ``ratio``.
    """

    frequencies: np.ndarray
    power: np.ndarray
    standard_error: np.ndarray
    realization_count: int
    band_edges: np.ndarray
    bin_counts: np.ndarray
    total_power: float
    ratio: Optional[np.ndarray] = None
    ratio_standard_error: Optional[np.ndarray] = None

    def to_rows(self) -> List[Dict[str, float]]:
        """Рядки таблиці для CSV."""
        rows = []
        for b in range(self.frequencies.size):
            row = {
                "omega": float(self.frequencies[b]),
                "omega_min": float(self.band_edges[b, 0]),
                "omega_max": float(self.band_edges[b, 1]),
                "power": float(self.power[b]),
                "stderr": float(self.standard_error[b]),
            }
            if self.ratio is not None and self.ratio_standard_error is not None:
                row["ratio"] = float(self.ratio[b])
                row["ratio_stderr"] = float(self.ratio_standard_error[b])
            rows.append(row)
        return rows


def _band_stats(values: np.ndarray) -> tuple:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def periodogram_samples(
    samples: np.ndarray,
    grid: TimeGrid,
    bands: int,
    reference: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SpectrumEstimate:
    """Періодограма P_k = dt/n·|FFT_k|² для масиву (R, n, d), усереднена за смугами.

    Біни k = 1..n/2 розбиваються на ``bands`` суміжних смуг; компоненти і
    реалізації об'єднуються. Стандартна похибка рахується як вибіркове
    стандартне відхилення значень бінів смуги, поділене на корінь з їх кількості.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim == 2:
        data = data[np.newaxis]
    if data.shape[1] != grid.n:
        raise ArgumentError(f"Довжина вибірки {data.shape[1]} не збігається з сіткою n={grid.n}")
    nbins = grid.n // 2
    if bands < 1 or bands > nbins:
        raise ArgumentError(f"Кількість смуг має бути в [1, {nbins}], отримано {bands}")
    spectrum = np.fft.rfft(data, axis=1)[:, 1 : nbins + 1, :]
    power = grid.dt / grid.n * np.abs(spectrum) ** 2
    omega = grid.omega_rfft[1 : nbins + 1]

    weights = np.full(nbins, 2.0)
    if grid.n % 2 == 0:
        weights[-1] = 1.0
    mean_bins = power.mean(axis=(0, 2))
    total = float(np.sum(weights * mean_bins) * grid.domega / (2.0 * math.pi))

    ref = None
    if reference is not None:
        ref = np.asarray(reference(omega), dtype=float)

    centers, levels, errors, edges, counts, ratios, ratio_errors = [], [], [], [], [], [], []
    for idx in np.array_split(np.arange(nbins), bands):
        block = power[:, idx, :]
        mean, se = _band_stats(block.ravel())
        centers.append(float(np.mean(omega[idx])))
        levels.append(mean)
        errors.append(se)
        edges.append((float(omega[idx[0]]), float(omega[idx[-1]])))
        counts.append(idx.size)
        if ref is not None:
            r_mean, r_se = _band_stats((block / ref[idx][np.newaxis, :, np.newaxis]).ravel())
            ratios.append(r_mean)
            ratio_errors.append(r_se)

    logger.debug(f"Періодограма: {data.shape[0]} реалізацій, {bands} смуг, повна потужність {total:.6g}")
    return SpectrumEstimate(
        frequencies=np.array(centers),
        power=np.array(levels),
        standard_error=np.array(errors),
        realization_count=int(data.shape[0]),
        band_edges=np.array(edges),
        bin_counts=np.array(counts),
        total_power=total,
        ratio=np.array(ratios) if ref is not None else None,
        ratio_standard_error=np.array(ratio_errors) if ref is not None else None,
    )


def periodogram(
    trajectories: Sequence[NoiseTrajectory],
    bands: int,
    reference: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SpectrumEstimate:
    """Смугова періодограма для набору траєкторій шуму.

    Raises:
        ArgumentError: Порожній набір або траєкторії з різними сітками чи параметрами.
    """
    if not trajectories:
        raise ArgumentError("Потрібна хоча б одна траєкторія")
    first = trajectories[0]
    for traj in trajectories[1:]:
        if traj.grid != first.grid:
            raise ArgumentError("Траєкторії мають різні часові сітки")
        if traj.params != first.params:
            raise ArgumentError("Траєкторії синтезовано з різними параметрами")
    stacked = np.stack([traj.samples for traj in trajectories])
    return periodogram_samples(stacked, first.grid, bands, reference)
