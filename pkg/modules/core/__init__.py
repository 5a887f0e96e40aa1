"""Базові типи qbath: параметри, сітки, сталі, спеціальні функції та винятки."""

from .constants import ConstantsTable, constants
from .errors import (
    ArgumentError,
    BracketError,
    BranchSelectionError,
    ConfigValidationError,
    ContractViolationError,
    DegenerateDensityError,
    DomainError,
    GridResolutionError,
    NumericalError,
    ParameterError,
    QBathError,
    SchemeFailureError,
    StepSizeError,
)
from .grids import SpaceGrid, TimeGrid
from .params import BathParams
from .special_functions import bernoulli_even, bernoulli_even_float, coth_stable, x_coth


__all__ = [
    "BathParams",
    "TimeGrid",
    "SpaceGrid",
    "ConstantsTable",
    "constants",
    "coth_stable",
    "x_coth",
    "bernoulli_even",
    "bernoulli_even_float",
    "QBathError",
    "ParameterError",
    "ConfigValidationError",
    "ArgumentError",
    "DomainError",
    "NumericalError",
    "StepSizeError",
    "GridResolutionError",
    "SchemeFailureError",
    "DegenerateDensityError",
    "BracketError",
    "BranchSelectionError",
    "ContractViolationError",
]
