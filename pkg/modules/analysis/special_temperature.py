"""Спеціальна температура T*, за якої квантові поправки в рівнянні дифузії взаємно знищуються.

При T* = (ℏ/2)·sqrt(γ/3τ) виконується τ/γ = ℏ²/(12T*²). Для радіаційної
сталої τ = e²/(6πε₀mc³) добуток T*·D не залежить від m і γ та дорівнює ℏc²/(8k_Bα).
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional

from modules.core.constants import ConstantsTable, constants
from modules.core.errors import DomainError
from modules.core.params import BathParams


@dataclass(frozen=True)
class UniversalTD:
    """Результат перевірки універсальності T*·D у SI.

    Attributes:
        mass: Маса, кг.
        gamma: Тертя, 1/с.
        tau: Радіаційна стала, с.
        temperature: T*, К.
        diffusion: D = k_B·T*/(mγ), м²/с.
        product: T*·D, К·м²/с.
        reference: ℏc²/(8k_Bα), К·м²/с.
        deviation: |product/reference - 1|.
    """

    mass: float
    gamma: float
    tau: float
    temperature: float
    diffusion: float
    product: float
    reference: float
    deviation: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def classical_reduction_temperature(params: BathParams) -> float:
    """T* = (ℏ/2)·sqrt(γ/(3τ)) в енергетичних одиницях (k_B = 1).

    Raises:
        DomainError: Якщо τ = 0 або ℏ = 0.
    """
    if params.tau <= 0.0:
        raise DomainError("T* не існує при τ = 0")
    if params.hbar <= 0.0:
        raise DomainError("T* = 0 при ℏ = 0")
    return 0.5 * params.hbar * math.sqrt(params.gamma / (3.0 * params.tau))


def universal_TD(params: BathParams, table: Optional[ConstantsTable] = None) -> UniversalTD:
    """Обчислює T*, D та T*·D для заряду e з масою ``params.m`` (кг) і тертям ``params.gamma`` (1/с).

    ℏ береться з таблиці сталих, τ = e²/(6πε₀mc³); ``params.hbar``, ``params.tau``
    і ``params.T`` ігноруються. Для α використовується e²/(4πε₀ℏc).
    """
    table = table or constants()
    tau = table.radiation_time(params.m)
    energy = 0.5 * table.hbar_SI * math.sqrt(params.gamma / (3.0 * tau))
    diffusion = energy / (params.m * params.gamma)
    temperature = table.energy_to_kelvin(energy)
    product = temperature * diffusion
    reference = table.hbar_SI * table.c**2 / (8.0 * table.kB_SI * table.alpha_from_definition())
    return UniversalTD(
        params.m, params.gamma, tau, temperature, diffusion, product, reference, abs(product / reference - 1.0)
    )
