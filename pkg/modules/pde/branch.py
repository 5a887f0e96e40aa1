"""Генератор фізичної гілки напівкласичного рівняння Смолуховського.

Рівняння mγ∂_tρ = Aρ - κK∂_t²ρ + mτ∂_t³ρ, окрім фізичних розв'язків, має
втікаючі. На фізичному підпросторі ∂_tρ = Sρ, де S є правим розв'язком
матричного полінома

    mτS³ - κKS² - mγS + A = 0.

S збирається зі спектрального розкладу поліноміальної задачі на власні
значення (супутня лінеаризація) у базисі, масштабованому на sqrt(ρ_B).
Власна пара належить фізичній гілці, якщо її значення найближче до кореня
скалярного полінома з коефіцієнтами Релея a = ⟨v, Av⟩, k = ⟨v, Kv⟩,
продовженого від класичного a/(mγ).
"""

import logging

import numpy as np
from scipy import linalg

from modules.core.errors import NumericalError
from modules.core.params import BathParams
from modules.pde.modes import track_physical_root


# Налаштування логування
logger = logging.getLogger(__name__)

# |β| / |α| нижче цієї межі означає нескінченне власне значення.
INFINITE_EIGENVALUE_TOLERANCE = 1e-10
GROWTH_TOLERANCE = 1e-9
CONDITION_LIMIT = 1e12


def _eigenpairs(a: np.ndarray, k: np.ndarray, params: BathParams, kappa: float):
    """Скінченні власні значення та v-блоки власних векторів лінеаризації."""
    m, gamma, tau = params.m, params.gamma, params.tau
    size = a.shape[0]
    eye = np.eye(size)
    zero = np.zeros((size, size))
    if tau > 0.0:
        companion = np.block(
            [
                [zero, eye, zero],
                [zero, zero, eye],
                [-a / (m * tau), (gamma / tau) * eye, kappa * k / (m * tau)],
            ]
        )
        values, vectors = linalg.eig(companion)
        return values, vectors[:size]

    # κK·s²v + mγ·s·v - A·v = 0, стан x = [v, s·v]
    left = np.block([[zero, eye], [a, -m * gamma * eye]])
    right = np.block([[eye, zero], [zero, kappa * k]])
    (alpha, beta), vectors = linalg.eig(left, right, homogeneous_eigvals=True)
    finite = np.abs(beta) > INFINITE_EIGENVALUE_TOLERANCE * np.abs(alpha)
    return alpha[finite] / beta[finite], vectors[:size, finite]


def _branch_score(value: complex, v: np.ndarray, a: np.ndarray, k: np.ndarray, params: BathParams, kappa: float):
    norm = np.vdot(v, v).real
    stiffness = np.vdot(v, a @ v) / norm
    curvature = np.vdot(v, k @ v) / norm
    m, gamma, tau = params.m, params.gamma, params.tau

    def coefficients_at(fraction: float) -> np.ndarray:
        return np.array([-m * fraction * tau, fraction * kappa * curvature, m * gamma, -stiffness], dtype=complex)

    physical = track_physical_root(coefficients_at, stiffness / (m * gamma))
    roots = np.roots(coefficients_at(1.0))
    others = np.delete(roots, np.argmin(np.abs(roots - physical))) if roots.size else roots
    nearest_other = float(np.min(np.abs(others - value))) if others.size else np.inf
    return abs(value - physical) / max(nearest_other, np.finfo(float).tiny)


def physical_branch_generator(
    generator: np.ndarray,
    curvature: np.ndarray,
    params: BathParams,
    kappa: float,
    stationary: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Будує S для ∂_tρ = Sρ на фізичній гілці.

    Args:
        generator: A, повний генератор (дрейф + дифузія) у формі скінченних об'ємів.
        curvature: K = T·δ_r², множник поправки T̂.
        params: Параметри термостата (m, γ, τ).
        kappa: κ = ℏ²/(12T²) або 0, якщо поправку T̂ вимкнено.
        stationary: Стаціонарна густина A (нуль-вектор), нормована на сітці.
        weights: Ваги квадратури сітки.

    Returns:
        Дійсна матриця S; ``weights @ S = 0`` і ``S @ stationary = 0`` до округлення.

    Raises:
        NumericalError: Фізичних мод менше за розмір сітки, серед них є зростаючі
            або їхній базис вироджений.
    """
    a = np.asarray(generator.toarray() if hasattr(generator, "toarray") else generator, dtype=float)
    k = np.asarray(curvature.toarray() if hasattr(curvature, "toarray") else curvature, dtype=float)
    size = a.shape[0]
    y = np.sqrt(np.maximum(stationary / np.max(stationary), 1e-300))
    a_scaled = a * y[np.newaxis, :] / y[:, np.newaxis]
    k_scaled = k * y[np.newaxis, :] / y[:, np.newaxis]

    values, vectors = _eigenpairs(a_scaled, k_scaled, params, kappa)
    if values.size < size:
        raise NumericalError(f"Фізична гілка: знайдено {values.size} скінченних мод із {size}")
    scores = np.array(
        [_branch_score(values[j], vectors[:, j], a_scaled, k_scaled, params, kappa) for j in range(values.size)]
    )
    selected = np.argsort(scores, kind="stable")[:size]
    branch = values[selected]
    if np.max(scores[selected]) >= 1.0:
        logger.warning(f"Фізична гілка: неоднозначний вибір мод, найгірша оцінка {np.max(scores[selected]):.3g}")
    magnitude = max(1.0, float(np.max(np.abs(branch))))
    if np.max(branch.real) > GROWTH_TOLERANCE * magnitude:
        raise NumericalError(f"Фізична гілка містить зростаючу моду Re s = {np.max(branch.real):.3e}")

    basis = vectors[:, selected]
    condition = float(np.linalg.cond(basis))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise NumericalError(f"Базис фізичної гілки вироджений (cond = {condition:.3e})")
    s_scaled = linalg.solve(basis.T, (basis * branch[np.newaxis, :]).T).T
    s = s_scaled * y[:, np.newaxis] / y[np.newaxis, :]
    leak = float(np.max(np.abs(s.imag)))
    if leak > 1e-8 * float(np.max(np.abs(s))):
        logger.warning(f"Фізична гілка: уявна частина S = {leak:.3e} відкинута")
    s = s.real

    w = np.asarray(weights, dtype=float)
    rho = np.asarray(stationary, dtype=float) / float(w @ stationary)
    projector = np.eye(size) - np.outer(rho, w)
    logger.debug(
        f"Фізична гілка: M={size}, cond={condition:.3e}, min Re s={np.min(branch.real):.4g}, "
        f"max Re s={np.max(branch.real):.3e}"
    )
    return projector @ s @ projector
