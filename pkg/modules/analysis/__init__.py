"""Квадратури, частота зрізу, дисперсійне співвідношення та спеціальна температура."""

from .cutoff import (
    CutoffResult,
    collision_cutoff,
    collision_friction,
    cutoff_estimate,
    cutoff_residual,
    momentum_dispersion_integral,
    solve_cutoff,
    weak_coupling_cutoff,
)
from .dispersion import DispersionSolution, dispersion_q2
from .special_temperature import UniversalTD, classical_reduction_temperature, universal_TD


__all__ = [
    "CutoffResult",
    "momentum_dispersion_integral",
    "cutoff_residual",
    "cutoff_estimate",
    "solve_cutoff",
    "weak_coupling_cutoff",
    "collision_cutoff",
    "collision_friction",
    "DispersionSolution",
    "dispersion_q2",
    "UniversalTD",
    "classical_reduction_temperature",
    "universal_TD",
]
