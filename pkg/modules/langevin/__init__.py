"""Рівняння Ланжевена з квантовим кольоровим шумом."""

from .ensemble import (
    EnsembleStats,
    ObservableStats,
    block_means,
    boltzmann_chi_square,
    momentum_dispersion_empirical,
    run_ensemble,
)
from .integrator import Trajectory, check_step, integrate, integrate_forcing
from .potentials import DoubleWell, Free, Harmonic, Potential, Tabulated, potential_from_config


__all__ = [
    "Potential",
    "Free",
    "Harmonic",
    "DoubleWell",
    "Tabulated",
    "potential_from_config",
    "Trajectory",
    "integrate",
    "integrate_forcing",
    "check_step",
    "EnsembleStats",
    "ObservableStats",
    "run_ensemble",
    "block_means",
    "momentum_dispersion_empirical",
    "boltzmann_chi_square",
]
