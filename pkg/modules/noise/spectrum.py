"""Квантова флуктуаційно-дисипативна спектральна густина сили Ланжевена."""

import math
from typing import Union

import numpy as np
from scipy import integrate

from modules.core.params import BathParams
from modules.operators.symbols import temperature_symbol


ArrayLike = Union[float, np.ndarray]


def fdt_spectral_density(omega: ArrayLike, params: BathParams) -> ArrayLike:
    """S_FF(ω) = mγ·ℏω·coth(βℏω/2) на одну компоненту, з границею 2mγT при ω → 0.

    Функція парна, неспадна за |ω| і не менша за 2mγT.
    """
    value = 2.0 * params.m * params.gamma * np.asarray(temperature_symbol(omega, params))
    return float(value) if np.ndim(omega) == 0 else value


def momentum_spectral_density(omega: ArrayLike, params: BathParams) -> ArrayLike:
    """S_PP(ω) = S_FF(ω)/(ω² + γ²) для вільної частинки."""
    w = np.asarray(omega, dtype=float)
    value = np.asarray(fdt_spectral_density(w, params)) / (w * w + params.gamma**2)
    return float(value) if np.ndim(omega) == 0 else value


def force_variance(cutoff: float, params: BathParams) -> float:
    """Дисперсія однієї компоненти сили (1/π)∫_0^Ω S_FF dω."""
    if cutoff <= 0.0:
        return 0.0
    value, _ = integrate.quad(lambda w: fdt_spectral_density(w, params), 0.0, cutoff, epsrel=1e-10, limit=200)
    return value / math.pi
