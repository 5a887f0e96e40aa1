"""Дисперсійне співвідношення для дисипативних просторових структур.

(ℏ/2m)²q⁴ + (ℏω/2m)coth(βℏω/2)q² - iω(γ + τω²) = 0

Квадратне рівняння відносно z = q². Основний розв'язок
z = (mω/ℏ)[(coth² + 4i(γ/ω + τω))^{1/2} - coth] з головною гілкою кореня.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from modules.core.errors import BranchSelectionError
from modules.core.params import BathParams
from modules.core.special_functions import x_coth


# Налаштування логування
logger = logging.getLogger(__name__)

BACK_SUBSTITUTION_TOLERANCE = 1e-8


@dataclass(frozen=True)
class DispersionSolution:
    """Пара коренів q² для частоти ω.

    Attributes:
        omega: Дійсна частота.
        q2: Основний корінь (головна гілка).
        q2_alternative: Другий корінь або None при ℏ = 0.
        residual: Відносна нев'язка підстановки основного кореня.
        removable: True для усувної точки ω = 0.
    """

    omega: float
    q2: complex
    q2_alternative: Optional[complex]
    residual: float
    removable: bool = False
    branch: str = "principal"

    @property
    def q(self) -> complex:
        """Корінь q з головною гілкою; другий корінь дорівнює -q."""
        return complex(np.sqrt(self.q2))

    def to_row(self) -> Dict[str, float]:
        alt = self.q2_alternative
        return {
            "omega": self.omega,
            "re_q2": self.q2.real,
            "im_q2": self.q2.imag,
            "re_q2_alt": math.nan if alt is None else alt.real,
            "im_q2_alt": math.nan if alt is None else alt.imag,
            "residual": self.residual,
        }


def dispersion_coefficients(omega: float, params: BathParams):
    """Коефіцієнти (a, b, c) квадратного рівняння a·z² + b·z + c = 0, z = q²."""
    a = (params.hbar / (2.0 * params.m)) ** 2
    b = params.T * float(x_coth(0.5 * params.hbar * omega / params.T)) / params.m
    c = -1j * omega * (params.gamma + params.tau * omega**2)
    return a, b, c


def quadratic_residual(z: complex, omega: float, params: BathParams) -> float:
    """|a·z² + b·z + c| відносно найбільшого доданка."""
    a, b, c = dispersion_coefficients(omega, params)
    terms = (a * z * z, b * z, c)
    scale = max(abs(t) for t in terms)
    return 0.0 if scale == 0.0 else abs(sum(terms)) / scale


def dispersion_q2(omega: float, params: BathParams) -> DispersionSolution:
    """Обчислює обидва корені q² дисперсійного співвідношення.

    Основний корінь береться у стійкій формі -2c/(b + s), s = sign(ω)·sqrt(b² - 4ac),
    що збігається з друкованою формулою, другий з теореми Вієта.
    При ω = 0 повертається q² = 0 з позначкою усувної точки.

    Raises:
        BranchSelectionError: Нев'язка підстановки перевищує 1e-8.
    """
    a, b, c = dispersion_coefficients(omega, params)
    if omega == 0.0:
        alternative = None if a == 0.0 else complex(-b / a)
        return DispersionSolution(0.0, 0j, alternative, 0.0, removable=True)
    if a == 0.0:
        principal = complex(-c / b)
        alternative = None
    else:
        disc = np.sqrt(complex(b * b - 4.0 * a * c))
        if omega > 0.0:
            principal = complex(-2.0 * c / (b + disc))
        else:
            principal = complex((-b - disc) / (2.0 * a))
        alternative = complex(c / (a * principal))
    residual = quadratic_residual(principal, omega, params)
    if residual > BACK_SUBSTITUTION_TOLERANCE:
        raise BranchSelectionError(f"Нев'язка підстановки {residual:.3e} для ω={omega:.6g}", residual)
    return DispersionSolution(float(omega), principal, alternative, residual)
