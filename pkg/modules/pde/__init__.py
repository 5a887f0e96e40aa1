"""Сіткові розв'язувачі рівнянь Клейна-Крамерса та Смолуховського."""

from .fields import (
    DensityField,
    DensitySeries,
    MomentumGrid,
    PhaseSpaceField,
    PhaseSpaceSeries,
    boltzmann_density,
    maxwell_boltzmann,
)
from .kramers import KramersSolver, solve_kramers
from .modes import ModeEvolution, free_mode_evolution, mode_amplitude, mode_decay_rate, single_mode_density
from .moments import (
    MomentFields,
    extract_moments,
    residual_continuity,
    residual_force_balance,
)
from .smoluchowski import (
    SmoluchowskiSolver,
    solve_smoluchowski,
    solve_smoluchowski_linearized,
    solve_smoluchowski_quantum,
)


__all__ = [
    "DensityField",
    "DensitySeries",
    "MomentumGrid",
    "PhaseSpaceField",
    "PhaseSpaceSeries",
    "boltzmann_density",
    "maxwell_boltzmann",
    "KramersSolver",
    "solve_kramers",
    "SmoluchowskiSolver",
    "solve_smoluchowski",
    "solve_smoluchowski_quantum",
    "solve_smoluchowski_linearized",
    "ModeEvolution",
    "free_mode_evolution",
    "mode_decay_rate",
    "mode_amplitude",
    "single_mode_density",
    "MomentFields",
    "extract_moments",
    "residual_continuity",
    "residual_force_balance",
]
