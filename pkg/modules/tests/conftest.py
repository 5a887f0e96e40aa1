"""Спільні фікстури тестів qbath."""

import logging

import pytest

from modules.core.grids import SpaceGrid, TimeGrid
from modules.core.params import BathParams


@pytest.fixture(autouse=True)
def quiet_logging(caplog):
    caplog.set_level(logging.WARNING)


@pytest.fixture
def classical_params():
    """m = γ = T = 1, ℏ = τ = 0."""
    return BathParams(m=1.0, gamma=1.0, tau=0.0, T=1.0, hbar=0.0, d=1)


@pytest.fixture
def quantum_params():
    """θ = βℏγ = 1."""
    return BathParams(m=1.0, gamma=1.0, tau=0.0, T=1.0, hbar=1.0, d=1)


@pytest.fixture
def ring():
    """Періодична сітка довжиною 2π з 64 вузлами."""
    return SpaceGrid(length=6.283185307179586, points=64, periodic=True)


@pytest.fixture
def short_time_grid():
    return TimeGrid(t0=0.0, dt=0.01, n=1024)
