"""Розв'язувач рівняння Клейна-Крамерса на фазовій сітці (p, r).

∂_t f + (p/m)∂_r f - ∂_rU ∂_p f = γ̂∂_p(p f + m T̂ ∂_p f)

Крок за Страном: півкрок зіткнень, повний крок переносу, півкрок зіткнень.

* Перенос записано для g = f·e^{βH} з потоками E(r)·g на гранях і MUSCL-
  реконструкцією g (обмежувач minmod), тому розподіл Максвелла-Больцмана є
  точною нерухомою точкою дискретного переносу. Інтегрування SSP-RK3.
* Зіткнення: потік Шарфеттера-Гуммеля за p з "потенціалом" p²/2m і
  точним експоненційним кроком по кожному стовпцю r.
* Поправки T̂ та γ̂ входять джерелом -(κ·D + (τ/γ)·L)∂_t²f у крок зіткнень,
  де L = D + дрейф є повним оператором зіткнень, D = γmT∂_p². Оцінка ∂_t²f
  запізнена на k кроків: max(κ, τ/γ)/(k·dt)² <= 1/4.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from modules.core.errors import SchemeFailureError, StepSizeError
from modules.core.params import BathParams
from modules.langevin.potentials import Potential
from modules.pde.fields import MomentumGrid, PhaseSpaceField, PhaseSpaceSeries, maxwell_boltzmann
from modules.pde.flux import exponential_propagators, face_coordinates, sg_matrix
from modules.pde.lagged import LaggedHistory
from modules.pde.smoluchowski import LAG_STABILITY_BOUND, POSITIVITY_TOLERANCE, lag_coefficient


# Налаштування логування
logger = logging.getLogger(__name__)

# Частка межі CFL для кроку за замовчуванням.
DEFAULT_CFL = 0.5
# Верхня межа γ·dt для розщеплення.
SPLITTING_LIMIT = 0.02


def _minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _shift(values: np.ndarray, periodic: bool, forward: bool) -> np.ndarray:
    if periodic:
        return np.roll(values, -1 if forward else 1, axis=-1)
    if forward:
        return np.concatenate([values[..., 1:], values[..., -1:]], axis=-1)
    return np.concatenate([values[..., :1], values[..., :-1]], axis=-1)


def muscl_faces(values: np.ndarray, velocity: np.ndarray, periodic: bool) -> np.ndarray:
    """Значення на правих гранях k+1/2 уздовж останньої осі, вибрані за знаком швидкості."""
    following = _shift(values, periodic, forward=True)
    preceding = _shift(values, periodic, forward=False)
    slope = _minmod(following - values, values - preceding)
    next_slope = _shift(slope, periodic, forward=True)
    if not periodic:
        next_slope[..., -1] = 0.0
    return np.where(velocity > 0.0, values + 0.5 * slope, following - 0.5 * next_slope)


@dataclass(frozen=True, eq=False)
class TransportCoefficients:
    """Множники добре збалансованого переносу.

    e_node, e_right: e^{-βU} у вузлах і на правих гранях (закриті грані дорівнюють 0).
    force_like: дискретний аналог ∂_rU, узгоджений з e^{-βU}.
    p_node, p_right: e^{-βp²/2m} у центрах комірок і на правих гранях.
    velocity: дискретний аналог p/m, узгоджений з e^{-βp²/2m}.
    """

    e_node: np.ndarray
    e_right: np.ndarray
    force_like: np.ndarray
    p_node: np.ndarray
    p_right: np.ndarray
    velocity: np.ndarray

    def speed(self, grid, momentum: MomentumGrid) -> float:
        """max|ṽ|/Δr + max|Ũ'|/Δp; крок dt допустимий при speed·dt <= 1."""
        return float(np.max(np.abs(self.velocity))) / grid.spacing + float(
            np.max(np.abs(self.force_like))
        ) / momentum.spacing


def transport_coefficients(
    grid, momentum: MomentumGrid, potential: Potential, params: BathParams
) -> TransportCoefficients:
    """Обчислює множники переносу для сіток і потенціалу."""
    beta, m = params.beta, params.m
    energy = potential.energy_1d(grid.r)
    shift = float(np.min(energy))
    e_node = np.exp(-beta * (energy - shift))
    e_faces = np.exp(-beta * (potential.energy_1d(face_coordinates(grid)) - shift))
    e_right = np.zeros(grid.points)
    e_right[: e_faces.size] = e_faces
    e_left = np.roll(e_right, 1) if grid.periodic else np.concatenate([[0.0], e_right[:-1]])
    force_like = -(e_right - e_left) / (beta * grid.weights) / e_node

    p_node = np.exp(-beta * momentum.p**2 / (2.0 * m))
    p_right = np.exp(-beta * momentum.faces[1:] ** 2 / (2.0 * m))
    p_right[-1] = 0.0
    p_left = np.concatenate([[0.0], p_right[:-1]])
    velocity = -(p_right - p_left) / (beta * momentum.spacing) / p_node
    return TransportCoefficients(e_node, e_right, force_like, p_node, p_right, velocity)


class KramersSolver:
    """Покроковий розв'язувач Клейна-Крамерса для фіксованих сіток і кроку."""

    def __init__(
        self,
        grid,
        momentum: MomentumGrid,
        potential: Potential,
        params: BathParams,
        dt: float,
        quantum_correction: bool = False,
    ) -> None:
        momentum.check_extent(params)
        self.grid = grid
        self.momentum = momentum
        self.potential = potential
        self.params = params
        self.dt = float(dt)
        self.quantum_correction = quantum_correction
        beta, m = params.beta, params.m
        coefficients = transport_coefficients(grid, momentum, potential, params)
        self.e_node = coefficients.e_node
        self.e_right = coefficients.e_right
        self.weights = grid.weights
        self.force_like = coefficients.force_like
        self.p_node = coefficients.p_node
        self.p_right = coefficients.p_right
        self.velocity = coefficients.velocity
        speed = coefficients.speed(grid, momentum)
        self.cfl = speed * self.dt
        if self.cfl > 1.0 + 1e-12:
            raise StepSizeError(f"Порушено умову CFL: {self.cfl:.3g} > 1", DEFAULT_CFL / speed)

        # Оператор зіткнень за p.
        left = np.arange(momentum.points - 1)
        right = left + 1
        weights_p = np.full(momentum.points, momentum.spacing)
        d_p = params.gamma * m * params.T
        collision = sg_matrix(left, right, momentum.p**2 / (2.0 * m), d_p, beta, momentum.spacing, weights_p)
        diffusion = d_p * sg_matrix(left, right, np.zeros(momentum.points), 1.0, 0.0, momentum.spacing, weights_p)
        self.diffusion_part = diffusion.toarray()
        self.drift_part = collision.toarray() - self.diffusion_part
        self.half_propagator, self.half_integral = exponential_propagators(collision, 0.5 * self.dt)

        self.kappa = lag_coefficient(params, quantum_correction)
        self.ratio = params.tau / params.gamma
        coefficient = max(self.kappa, self.ratio)
        self.lag_steps = (
            max(1, int(math.ceil(math.sqrt(coefficient / LAG_STABILITY_BOUND) / self.dt))) if coefficient > 0 else 0
        )
        self._history = LaggedHistory(lag=self.lag_steps) if self.lag_steps else None
        logger.debug(
            f"KramersSolver: {momentum.points}x{grid.points}, dt={self.dt:.6g}, CFL={self.cfl:.3f}, лаг={self.lag_steps}"
        )

    def transport_rate(self, f: np.ndarray) -> np.ndarray:
        """Права частина -(p/m)∂_r f + ∂_rU ∂_p f у формі скінченних об'ємів."""
        g_r = f / self.e_node[np.newaxis, :]
        faces = muscl_faces(g_r, self.velocity[:, np.newaxis], self.grid.periodic)
        flux_right = self.e_right[np.newaxis, :] * faces
        if self.grid.periodic:
            flux_left = np.roll(flux_right, 1, axis=1)
        else:
            flux_left = np.concatenate([np.zeros((f.shape[0], 1)), flux_right[:, :-1]], axis=1)
        rate = -self.velocity[:, np.newaxis] * (flux_right - flux_left) / self.weights[np.newaxis, :]

        if np.any(self.force_like):
            g_p = (f / self.p_node[:, np.newaxis]).T
            faces_p = muscl_faces(g_p, -self.force_like[:, np.newaxis], periodic=False).T
            flux_up = self.p_right[:, np.newaxis] * faces_p
            flux_down = np.concatenate([np.zeros((1, f.shape[1])), flux_up[:-1]], axis=0)
            rate = rate + self.force_like[np.newaxis, :] * (flux_up - flux_down) / self.momentum.spacing
        return rate

    def _transport(self, f: np.ndarray) -> np.ndarray:
        dt = self.dt
        stage1 = f + dt * self.transport_rate(f)
        stage2 = 0.75 * f + 0.25 * (stage1 + dt * self.transport_rate(stage1))
        return f / 3.0 + 2.0 / 3.0 * (stage2 + dt * self.transport_rate(stage2))

    def _correction(self, f: np.ndarray) -> np.ndarray:
        if self._history is None:
            return np.zeros_like(f)
        self._history.push(f)
        d2f = self._history.second_difference(self.dt)
        if d2f is None:
            return np.zeros_like(f)
        return -(self.kappa * self.diffusion_part + self.ratio * (self.drift_part + self.diffusion_part)) @ d2f

    def step(self, f: np.ndarray) -> np.ndarray:
        """Один крок f^n → f^{n+1}."""
        source = self._correction(f)
        f = self.half_propagator @ f + self.half_integral @ source
        f = self._transport(f)
        return self.half_propagator @ f + self.half_integral @ source

    def run(self, f0: PhaseSpaceField, t_end: float, record_every: int = 1) -> PhaseSpaceSeries:
        """Інтегрує від ``f0`` до ``t_end``."""
        steps = max(1, int(round(t_end / self.dt)))
        f = np.asarray(f0.values, dtype=float).copy()
        mass0 = f0.mass
        times: List[float] = [f0.time]
        values: List[np.ndarray] = [f.copy()]
        min_value = float(np.min(f))
        for n in range(1, steps + 1):
            f = self.step(f)
            t = f0.time + n * self.dt
            low = float(np.min(f))
            min_value = min(min_value, low)
            if not np.all(np.isfinite(f)) or low < -POSITIVITY_TOLERANCE * float(np.max(np.abs(f))):
                raise SchemeFailureError(f"Фазова густина втратила додатність (min f = {low:.3e})", t)
            if n % record_every == 0 or n == steps:
                times.append(t)
                values.append(f.copy())
        final = PhaseSpaceField(f, self.momentum, self.grid, times[-1])
        equilibrium = maxwell_boltzmann(self.potential, self.params, self.grid, self.momentum).values
        diagnostics: Dict[str, object] = {
            "scheme": "strang(sg-exponential collision, muscl ssp-rk3 transport)",
            "dt": self.dt,
            "steps": steps,
            "cfl": self.cfl,
            "lag_steps": self.lag_steps,
            "quantum_correction": self.quantum_correction,
            "mass_drift": abs(final.mass - mass0),
            "min_value": min_value,
            "maxwell_boltzmann_deviation": float(
                np.max(np.abs(f / final.mass - equilibrium)) / np.max(equilibrium)
            ),
        }
        logger.info(
            f"Крамерс: {steps} кроків, CFL={self.cfl:.3f}, дрейф маси {diagnostics['mass_drift']:.2e}"
        )
        return PhaseSpaceSeries(np.array(times), np.array(values), self.momentum, self.grid, diagnostics)


def default_kramers_step(grid, momentum: MomentumGrid, potential: Potential, params: BathParams, t_end: float) -> float:
    """Крок за замовчуванням: min(½·CFL, 0.02/γ), підігнаний під t_end."""
    speed = transport_coefficients(grid, momentum, potential, params).speed(grid, momentum)
    dt = min(DEFAULT_CFL / speed if speed > 0 else math.inf, SPLITTING_LIMIT / params.gamma)
    steps = max(1, int(math.ceil(t_end / dt)))
    return t_end / steps


def solve_kramers(
    f0: PhaseSpaceField,
    potential: Potential,
    params: BathParams,
    t_end: float,
    quantum_correction: bool = False,
    dt: Optional[float] = None,
    record_every: int = 1,
) -> PhaseSpaceSeries:
    """Розв'язує рівняння Клейна-Крамерса від ``f0`` до ``t_end``.

    Args:
        f0: Початкова фазова густина.
        potential: Зовнішній потенціал.
        params: Параметри термостата.
        t_end: Кінцевий час.
        quantum_correction: Чи вмикати напівкласичну поправку T̂.
        dt: Крок часу; за замовчуванням min(½·CFL, 0.02/γ).
        record_every: Записувати кожен k-й крок.

    Raises:
        ParameterError: p_max < 6·sqrt(mT).
        StepSizeError: Порушено умову CFL.
        SchemeFailureError: Фазова густина стала від'ємною.
    """
    if dt is None:
        dt = default_kramers_step(f0.grid, f0.momentum, potential, params, t_end)
    solver = KramersSolver(f0.grid, f0.momentum, potential, params, dt, quantum_correction)
    return solver.run(f0, t_end, record_every)
