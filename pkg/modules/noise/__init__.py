"""Квантовий ФДТ-спектр, синтез гаусового шуму та періодограми."""

from .periodogram import SpectrumEstimate, periodogram, periodogram_samples
from .spectrum import fdt_spectral_density, force_variance, momentum_spectral_density
from .synthesis import NoiseTrajectory, component_rng, sample_noise, sample_noise_batch, synthesize


__all__ = [
    "fdt_spectral_density",
    "momentum_spectral_density",
    "force_variance",
    "NoiseTrajectory",
    "sample_noise",
    "sample_noise_batch",
    "synthesize",
    "component_rng",
    "SpectrumEstimate",
    "periodogram",
    "periodogram_samples",
]
