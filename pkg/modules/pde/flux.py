"""Консервативні дискретизації потоку дрейф-дифузії (схема Шарфеттера-Гуммеля).

Потік через грань i+1/2 записується як
J = (D/h)·[B(v)ρ_i - B(-v)ρ_{i+1}], v = β(U_{i+1} - U_i), B(x) = x/(e^x - 1),
тому дискретний розподіл Больцмана exp(-βU_i) є точним стаціонарним станом.
На обмеженій сітці потоки через зовнішні грані дорівнюють нулю.
"""

from typing import Tuple

import numpy as np
import scipy.sparse as sparse
from scipy import linalg, special

from modules.core.grids import SpaceGrid


def bernoulli_weight(x: np.ndarray) -> np.ndarray:
    """B(x) = x/(e^x - 1) з B(0) = 1."""
    return 1.0 / special.exprel(np.asarray(x, dtype=float))


def face_indices(grid: SpaceGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Пари сусідніх вузлів (лівий, правий) для внутрішніх граней."""
    m = grid.points
    if grid.periodic:
        left = np.arange(m)
        return left, (left + 1) % m
    left = np.arange(m - 1)
    return left, left + 1


def face_coordinates(grid: SpaceGrid) -> np.ndarray:
    """Координати внутрішніх граней (середини між сусідніми вузлами)."""
    left, _ = face_indices(grid)
    return grid.r[left] + 0.5 * grid.spacing


def sg_generator(grid: SpaceGrid, energy: np.ndarray, diffusion: float, beta: float) -> sparse.csr_matrix:
    """Матриця A для dρ/dt = ∂_r(D(∂_rρ + βρ∂_rU)) у формі скінченних об'ємів."""
    left, right = face_indices(grid)
    return sg_matrix(left, right, energy, diffusion, beta, grid.spacing, grid.weights)


def sg_matrix(
    left: np.ndarray,
    right: np.ndarray,
    energy: np.ndarray,
    diffusion: float,
    beta: float,
    spacing: float,
    weights: np.ndarray,
) -> sparse.csr_matrix:
    """Генератор SG для довільного набору граней (left, right) з кроком ``spacing``."""
    size = len(weights)
    u = np.asarray(energy, dtype=float)
    v = beta * (u[right] - u[left])
    forward = diffusion / spacing * bernoulli_weight(v)
    backward = diffusion / spacing * bernoulli_weight(-v)
    w = np.asarray(weights, dtype=float)
    rows = np.concatenate([left, left, right, right])
    cols = np.concatenate([left, right, left, right])
    data = np.concatenate([-forward / w[left], backward / w[left], forward / w[right], -backward / w[right]])
    return sparse.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()


def laplacian(grid: SpaceGrid) -> sparse.csr_matrix:
    """Консервативний дискретний лапласіан (генератор SG при U = 0, D = 1)."""
    return sg_generator(grid, np.zeros(grid.points), 1.0, 0.0)


def exponential_propagators(generator: np.ndarray, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """Повертає E = exp(A·dt) та Φ = ∫_0^dt exp(A·s) ds.

    Обидві матриці беруться з експоненти розширеного блоку [[A·dt, I·dt], [0, 0]].
    """
    a = np.asarray(generator.toarray() if sparse.issparse(generator) else generator, dtype=float)
    n = a.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = a * dt
    block[:n, n:] = np.eye(n) * dt
    expo = linalg.expm(block)
    return expo[:n, :n], expo[:n, n:]
