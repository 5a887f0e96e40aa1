"""Дисперсія імпульсу як функція частоти зрізу та розв'язок рівняння для зрізу Ω.

⟨P²⟩(Ω) = (d·mγ/π)∫_0^Ω ℏω·coth(βℏω/2)/(ω² + γ²) dω

Частота зрізу визначається умовою ⟨P²⟩(Ω) = d·m·T, тобто

    βℏγ∫_0^1 coth(βℏΩ√x/2)/(x + (γ/Ω)²) dx = 2π.
"""

import logging
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Dict, Tuple

from scipy import integrate, optimize

from modules.core.errors import ArgumentError, BracketError, DomainError
from modules.core.params import BathParams
from modules.core.special_functions import x_coth


# Налаштування логування
logger = logging.getLogger(__name__)

INNER_EPSABS = 1e-12
INNER_EPSREL = 1e-12
QUAD_LIMIT = 500
BRACKET_FACTORS = (0.01, 100.0)
MAX_BRACKET_EXPANSIONS = 20


@dataclass(frozen=True)
class CutoffResult:
    """Розв'язок рівняння для частоти зрізу.

    Attributes:
        omega: Частота зрізу Ω.
        residual: Відносна нев'язка рівняння (F(Ω) / 2π).
        iterations: Кількість ітерацій brentq.
        bracket: Використаний інтервал пошуку.
        estimate: Оцінка sqrt(2πγT/ℏ).
    """

    omega: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]
    estimate: float

    @property
    def ratio(self) -> float:
        """Ω / sqrt(2πγT/ℏ)."""
        return self.omega / self.estimate

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["bracket"] = list(self.bracket)
        data["ratio"] = self.ratio
        return data


def momentum_dispersion_integral(cutoff: float, params: BathParams) -> float:
    """⟨P²⟩ для частоти зрізу ``cutoff`` (d-вимірний слід).

    Підінтегральний вираз записано як 2T·x·coth(x)/(ω² + γ²), x = βℏω/2,
    тому границя ω → 0 регулярна. При ℏ = 0 і Ω = ∞ повертає d·m·T.
    """
    if cutoff < 0 or math.isnan(cutoff):
        raise ArgumentError(f"Частота зрізу має бути >= 0, отримано {cutoff!r}")
    if cutoff == 0.0:
        return 0.0
    m, gamma, T = params.m, params.gamma, params.T
    prefactor = params.d * m * gamma / math.pi
    if params.hbar == 0.0:
        return prefactor * 2.0 * T * math.atan(cutoff / gamma) / gamma
    if math.isinf(cutoff):
        return math.inf
    half = 0.5 * params.hbar / T

    def integrand(y: float) -> float:
        # ω = γ·y
        return 2.0 * T * float(x_coth(half * gamma * y)) / (gamma * (y * y + 1.0))

    upper = cutoff / gamma
    breaks = [p for p in (1.0, 1.0 / (half * gamma)) if 0.0 < p < upper]
    value, _ = integrate.quad(integrand, 0.0, upper, epsrel=1e-11, epsabs=0.0, limit=QUAD_LIMIT, points=breaks or None)
    return prefactor * value


def cutoff_residual(omega: float, params: BathParams) -> float:
    """F(Ω) = βℏγ∫_0^1 coth(βℏΩ√x/2)/(x + (γ/Ω)²) dx - 2π.

    Після підстановки x = u² підінтегральний вираз (2/a)·(au)coth(au)/(u² + g²),
    a = βℏΩ/2, g = γ/Ω, не має особливості в нулі.
    """
    a = 0.5 * params.hbar * omega / params.T
    g = params.gamma / omega

    def integrand(u: float) -> float:
        return 2.0 / a * float(x_coth(a * u)) / (u * u + g * g)

    breaks = [g] if 0.0 < g < 1.0 else None
    value, _ = integrate.quad(
        integrand, 0.0, 1.0, epsabs=INNER_EPSABS, epsrel=INNER_EPSREL, limit=QUAD_LIMIT, points=breaks
    )
    return params.theta * value - 2.0 * math.pi


def cutoff_estimate(params: BathParams) -> float:
    """Середнє геометричне sqrt(2πγT/ℏ) частоти тертя 2πγ та частоти Мацубари T/ℏ."""
    return math.sqrt(2.0 * math.pi * params.gamma * params.T / params.hbar)


def _weak_coupling_integrand(x: float) -> float:
    # (x·coth x - 1)/x², ряд 1/3 - x²/45 біля нуля
    if x < 1e-3:
        return 1.0 / 3.0 - x * x / 45.0
    return (float(x_coth(x)) - 1.0) / (x * x)


@lru_cache(maxsize=None)
def _weak_coupling_root() -> float:
    def residual(upper: float) -> float:
        value, _ = integrate.quad(_weak_coupling_integrand, 0.0, upper, epsabs=0.0, epsrel=1e-12)
        return value - 1.0 / upper

    return float(optimize.brentq(residual, 1.0, 3.0, xtol=1e-14))


def weak_coupling_cutoff(params: BathParams) -> float:
    """Границя Ω при θ → 0: Ω = 2X·T/ℏ, де ∫_0^X (x·coth x - 1)/x² dx = 1/X.

    Відношення до sqrt(2πγT/ℏ) зростає як 2X/sqrt(2πθ), тому при малих θ
    оцінка середнім геометричним занижує Ω у рази.
    """
    if params.hbar <= 0.0:
        raise DomainError("Частота зрізу скінченна лише при ℏ > 0")
    return 2.0 * _weak_coupling_root() * params.T / params.hbar


def solve_cutoff(params: BathParams) -> CutoffResult:
    """Розв'язує рівняння для частоти зрізу методом Брента.

    Початковий інтервал [0.01, 100]·sqrt(2πγT/ℏ) геометрично розширюється,
    доки нев'язка не змінить знак.

    Raises:
        DomainError: Якщо ℏ = 0 (класична границя Ω → ∞).
        BracketError: Якщо знак не змінився або нев'язка не монотонна.
    """
    if params.hbar <= 0.0:
        raise DomainError("Частота зрізу скінченна лише при ℏ > 0")
    estimate = cutoff_estimate(params)
    low, high = BRACKET_FACTORS[0] * estimate, BRACKET_FACTORS[1] * estimate
    f_low, f_high = cutoff_residual(low, params), cutoff_residual(high, params)
    expansions = 0
    while (f_low > 0.0 or f_high < 0.0) and expansions < MAX_BRACKET_EXPANSIONS:
        if f_low > 0.0:
            low /= 10.0
            f_low = cutoff_residual(low, params)
        if f_high < 0.0:
            high *= 10.0
            f_high = cutoff_residual(high, params)
        expansions += 1
    if f_low > 0.0 or f_high < 0.0:
        raise BracketError(
            f"Нев'язка не змінює знак на [{low:.6g}, {high:.6g}]", (low, high), (f_low, f_high)
        )
    middle = math.sqrt(low * high)
    f_middle = cutoff_residual(middle, params)
    if not (f_low < f_middle < f_high):
        raise BracketError(
            f"Нев'язка не монотонна на [{low:.6g}, {high:.6g}]", (low, high), (f_low, f_middle, f_high)
        )

    omega, info = optimize.brentq(
        cutoff_residual, low, high, args=(params,), xtol=1e-14 * estimate, full_output=True
    )
    residual = abs(cutoff_residual(omega, params)) / (2.0 * math.pi)
    logger.info(f"Частота зрізу: Ω={omega:.12g} (θ={params.theta:.4g}), ітерацій {info.iterations}")
    return CutoffResult(omega, residual, info.iterations, (low, high), estimate)


def collision_cutoff(mean_free_path: float, params: BathParams) -> float:
    """Частота зіткнень Ω = 2π·sqrt(T/m)/λ."""
    if not mean_free_path > 0:
        raise DomainError(f"Довжина вільного пробігу має бути > 0, отримано {mean_free_path!r}")
    return 2.0 * math.pi * math.sqrt(params.T / params.m) / mean_free_path


def collision_friction(mean_free_path: float, params: BathParams) -> float:
    """Тертя γ = 2πℏ/(mλ²), за якого оцінка зрізу збігається з частотою зіткнень."""
    if not mean_free_path > 0:
        raise DomainError(f"Довжина вільного пробігу має бути > 0, отримано {mean_free_path!r}")
    return 2.0 * math.pi * params.hbar / (params.m * mean_free_path**2)
