"""Розв'язувачі рівняння Смолуховського mγ̂∂_tρ = ∂_r(ρ∂_rU + T̂∂_rρ) та його квантових розширень.

Базова схема: потік Шарфеттера-Гуммеля і точний експоненційний крок
ρ^{n+1} = E·ρ^n + Φ·S^n/(mγ), де E = exp(A·dt), Φ = ∫_0^dt exp(A·s) ds.

Напівкласичні поправки T̂ ≈ T(1 - κ∂_t²), κ = ℏ²/(12T²), та γ̂ = γ(1 - (τ/γ)∂_t²)
інтегруються однією з двох схем.

``branch`` (за замовчуванням): A/(mγ) замінюється генератором фізичної гілки
S, mτS³ - κKS² - mγS + A = 0 (див. :mod:`modules.pde.branch`). Кожна мода
згасає з фізичним коренем свого кубічного полінома, а dt не обмежений.

``lagged``: поправки входять у джерело S^n через запізнені триточкові оцінки ∂_t²:

    C^n = (τ/γ)·G·δ²ρ + (τ/γ - κ)·K·δ²ρ + (τ/γ)·δ²C,

де K = T·δ_r² є дифузійною частиною генератора, G дрейфовою частиною,
δ²ρ береться з рівнів n, n-1, n-2, а δ²C з рівнів n-1, n-2, n-3.
Рекурсія стійка при max(κ, τ/γ)/dt² <= 1/4, тобто dt >= 2·sqrt(max(κ, τ/γ)).
При T = T* коефіцієнти збігаються, і для вільної частинки C ≡ 0.
"""

import logging
import math
from typing import Dict, List, Optional

import numpy as np
from scipy import linalg

from modules.core.errors import ArgumentError, SchemeFailureError, StepSizeError
from modules.core.params import BathParams
from modules.langevin.potentials import Free, Potential
from modules.operators.quantum_potential import bohm_flux_divergence
from modules.pde.branch import physical_branch_generator
from modules.pde.fields import DensityField, DensitySeries, boltzmann_density
from modules.pde.flux import exponential_propagators, laplacian, sg_generator
from modules.pde.lagged import LaggedHistory


# Налаштування логування
logger = logging.getLogger(__name__)

LAG_STABILITY_BOUND = 0.25
POSITIVITY_TOLERANCE = 1e-12
DEFAULT_STEPS = 200

BOHM_NONE = "none"
BOHM_NONLINEAR = "nonlinear"
BOHM_LINEAR = "linear"

SCHEME_BRANCH = "branch"
SCHEME_LAGGED = "lagged"


class SmoluchowskiSolver:
    """Покроковий розв'язувач для заданих сітки, потенціалу та параметрів.

    Args:
        grid: Просторова сітка.
        potential: Зовнішній потенціал (на періодичній сітці має бути періодичним).
        params: Параметри термостата.
        dt: Крок часу.
        quantum_correction: Чи вмикати напівкласичну поправку T̂.
        bohm: ``"none"``, ``"nonlinear"`` (потенціал Бома) або ``"linear"`` (-ℏ²∂_r⁴ρ/4m).
        scheme: ``"branch"`` (генератор фізичної гілки) або ``"lagged"`` (запізнене джерело).
    """

    def __init__(
        self,
        grid,
        potential: Potential,
        params: BathParams,
        dt: float,
        quantum_correction: bool = False,
        bohm: str = BOHM_NONE,
        scheme: str = SCHEME_BRANCH,
    ) -> None:
        if bohm not in (BOHM_NONE, BOHM_NONLINEAR, BOHM_LINEAR):
            raise ArgumentError(f"Невідомий режим члена Бома '{bohm}'")
        if scheme not in (SCHEME_BRANCH, SCHEME_LAGGED):
            raise ArgumentError(f"Невідома схема поправок '{scheme}'")
        if bohm == BOHM_LINEAR and not grid.periodic:
            raise ArgumentError("Лінеаризований член Бома потребує періодичної сітки")
        self.grid = grid
        self.potential = potential
        self.params = params
        self.dt = float(dt)
        self.bohm = bohm
        self.scheme = scheme
        self.quantum_correction = quantum_correction
        self.mgamma = params.m * params.gamma
        self.kappa = lag_coefficient(params, quantum_correction)
        self.ratio = params.tau / params.gamma
        corrected = self.kappa > 0.0 or self.ratio > 0.0
        self._lagged = corrected and scheme == SCHEME_LAGGED
        if self._lagged:
            check_lag_step(params, quantum_correction, self.dt)
        if bohm == BOHM_NONLINEAR:
            bound = bohm_step_bound(grid, params)
            if self.dt > bound:
                raise StepSizeError(f"Явний член Бома нестійкий при dt={self.dt:.6g}", bound)

        energy = potential.energy_1d(grid.r)
        full = sg_generator(grid, energy, params.T, params.beta)
        self.diffusion_part = params.T * laplacian(grid)
        self.drift_part = full - self.diffusion_part
        if bohm == BOHM_LINEAR:
            lap = laplacian(grid)
            self.drift_part = self.drift_part - params.hbar**2 / (4.0 * params.m) * (lap @ lap)
        if corrected and scheme == SCHEME_BRANCH:
            generator = physical_branch_generator(
                (self.drift_part + self.diffusion_part).toarray(),
                self.diffusion_part.toarray(),
                params,
                self.kappa,
                self._stationary_density(energy),
                grid.weights,
            )
        else:
            generator = (self.drift_part + self.diffusion_part) / self.mgamma
        self.propagator, self.integral = exponential_propagators(generator, self.dt)

        self._rho_history = LaggedHistory()
        self._bohm_history = LaggedHistory()
        self._c_history = LaggedHistory()
        for _ in range(3):
            self._c_history.push(np.zeros(grid.points))
        logger.debug(
            f"SmoluchowskiSolver: M={grid.points}, dt={self.dt:.6g}, κ={self.kappa:.3g}, τ/γ={self.ratio:.3g}, "
            f"Бом={bohm}, схема={scheme}"
        )

    def _stationary_density(self, energy: np.ndarray) -> np.ndarray:
        if self.bohm == BOHM_LINEAR and np.ptp(energy) > 0.0:
            null = linalg.null_space((self.drift_part + self.diffusion_part).toarray())[:, 0]
            return null / float(self.grid.weights @ null)
        return boltzmann_density(self.potential, self.params, self.grid).values

    def _correction(self, rho: np.ndarray, bohm_term: np.ndarray) -> np.ndarray:
        if not self._lagged:
            return np.zeros_like(rho)
        self._rho_history.push(rho)
        self._bohm_history.push(bohm_term)
        d2rho = self._rho_history.second_difference(self.dt)
        if d2rho is None:
            c = np.zeros_like(rho)
        else:
            c = self.ratio * (self.drift_part @ d2rho) + (self.ratio - self.kappa) * (self.diffusion_part @ d2rho)
            if self.ratio:
                c = c + self.ratio * self._c_history.second_difference(self.dt)
                d2bohm = self._bohm_history.second_difference(self.dt)
                if d2bohm is not None:
                    c = c + self.ratio * d2bohm
        self._c_history.push(c)
        return c

    def step(self, rho: np.ndarray) -> np.ndarray:
        """Один крок ρ^n → ρ^{n+1}."""
        if self.bohm == BOHM_NONLINEAR:
            bohm_term = bohm_flux_divergence(DensityField(rho, self.grid), self.params)
        else:
            bohm_term = np.zeros_like(rho)
        source = (self._correction(rho, bohm_term) + bohm_term) / self.mgamma
        return self.propagator @ rho + self.integral @ source

    def run(self, rho0: DensityField, t_end: float, record_every: int = 1) -> DensitySeries:
        """Інтегрує від ``rho0`` до ``t_end`` (кількість кроків round(t_end/dt))."""
        steps = max(1, int(round(t_end / self.dt)))
        rho = np.asarray(rho0.values, dtype=float).copy()
        mass0 = rho0.mass
        times: List[float] = [rho0.time]
        values: List[np.ndarray] = [rho.copy()]
        min_value = float(np.min(rho))
        for n in range(1, steps + 1):
            rho = self.step(rho)
            t = rho0.time + n * self.dt
            peak = float(np.max(np.abs(rho)))
            low = float(np.min(rho))
            min_value = min(min_value, low)
            if not np.all(np.isfinite(rho)) or low < -POSITIVITY_TOLERANCE * max(peak, 1.0):
                raise SchemeFailureError(f"Густина втратила додатність (min ρ = {low:.3e})", t)
            if n % record_every == 0 or n == steps:
                times.append(t)
                values.append(rho.copy())
        final = DensityField(rho, self.grid, times[-1])
        corrected = self.kappa > 0.0 or self.ratio > 0.0
        diagnostics: Dict[str, object] = {
            "scheme": f"scharfetter-gummel/exponential/{self.scheme}" if corrected else "scharfetter-gummel/exponential",
            "dt": self.dt,
            "steps": steps,
            "quantum_correction": self.quantum_correction,
            "bohm": self.bohm,
            "kappa": self.kappa,
            "tau_over_gamma": self.ratio,
            "mass_drift": abs(final.mass - mass0),
            "min_density": min_value,
            "boltzmann_deviation": boltzmann_deviation(final, self.potential, self.params),
        }
        logger.info(
            f"Смолуховський: {steps} кроків, дрейф маси {diagnostics['mass_drift']:.2e}, "
            f"відхилення від Больцмана {diagnostics['boltzmann_deviation']:.2e}"
        )
        return DensitySeries(np.array(times), np.array(values), self.grid, diagnostics)


def lag_coefficient(params: BathParams, quantum_correction: bool) -> float:
    """κ = ℏ²/(12T²), якщо поправку T̂ увімкнено, інакше 0."""
    return params.hbar**2 / (12.0 * params.T**2) if quantum_correction else 0.0


def lag_minimum_step(params: BathParams, quantum_correction: bool) -> float:
    """Найменший dt, за якого запізнена оцінка ∂_t² стійка: 2·sqrt(max(κ, τ/γ))."""
    return 2.0 * math.sqrt(max(lag_coefficient(params, quantum_correction), params.tau / params.gamma))


def check_lag_step(params: BathParams, quantum_correction: bool, dt: float, lag: int = 1) -> None:
    """Перевіряє max(κ, τ/γ)/(lag·dt)² <= 1/4."""
    coefficient = max(lag_coefficient(params, quantum_correction), params.tau / params.gamma)
    if coefficient > 0.0 and coefficient / (lag * dt) ** 2 > LAG_STABILITY_BOUND * (1.0 + 1e-8):
        raise StepSizeError(
            f"Запізнена оцінка ∂_t² нестійка: max(κ, τ/γ)/dt² = {coefficient / (lag * dt) ** 2:.3g} > 1/4",
            lag_minimum_step(params, quantum_correction) / lag,
        )


def bohm_step_bound(grid, params: BathParams) -> float:
    """Межа явного кроку для члена Бома dt <= Δr⁴/(8ν), ν = ℏ²/(4m²γ)."""
    nu = params.hbar**2 / (4.0 * params.m**2 * params.gamma)
    return math.inf if nu == 0.0 else grid.spacing**4 / (8.0 * nu)


def boltzmann_deviation(rho: DensityField, potential: Potential, params: BathParams) -> float:
    """max|ρ - ρ_B| / max ρ_B для нормованої густини."""
    reference = boltzmann_density(potential, params, rho.grid).values
    return float(np.max(np.abs(rho.normalized().values - reference)) / np.max(reference))


def _default_dt(t_end: float, minimum: float, maximum: float = math.inf) -> float:
    steps = DEFAULT_STEPS
    if minimum > 0.0:
        steps = min(steps, max(1, int(math.floor(t_end / minimum * (1.0 + 1e-9)))))
    if t_end / steps > maximum:
        steps = int(math.ceil(t_end / maximum))
    return t_end / steps


def _scheme_minimum_step(params: BathParams, quantum_correction: bool, scheme: str) -> float:
    return lag_minimum_step(params, quantum_correction) if scheme == SCHEME_LAGGED else 0.0


def solve_smoluchowski(
    rho0: DensityField,
    potential: Potential,
    params: BathParams,
    t_end: float,
    quantum_correction: bool = False,
    dt: Optional[float] = None,
    record_every: int = 1,
    scheme: str = SCHEME_BRANCH,
) -> DensitySeries:
    """Розв'язує рівняння Смолуховського з опційною поправкою T̂.

    Радіаційна поправка γ̂ вмикається автоматично при τ > 0. За
    замовчуванням dt = t_end/200; у схемі ``lagged`` не менше за межу
    стійкості запізнення.

    Raises:
        StepSizeError: Порушено межу стійкості запізненої оцінки.
        SchemeFailureError: Густина стала від'ємною.
        NumericalError: Не вдалося виділити фізичну гілку.
    """
    if dt is None:
        dt = _default_dt(t_end, _scheme_minimum_step(params, quantum_correction, scheme))
    solver = SmoluchowskiSolver(rho0.grid, potential, params, dt, quantum_correction, scheme=scheme)
    return solver.run(rho0, t_end, record_every)


def solve_smoluchowski_quantum(
    rho0: DensityField,
    potential: Potential,
    params: BathParams,
    t_end: float,
    quantum_correction: bool = False,
    dt: Optional[float] = None,
    record_every: int = 1,
    scheme: str = SCHEME_BRANCH,
) -> DensitySeries:
    """Квантово-квантове рівняння Смолуховського з потенціалом Бома.

    Член ∂_r(ρ∂_rQ) перераховується на кожному кроці і береться явно,
    лінійна дифузія інтегрується точно. При ℏ = 0 результат збігається з
    :func:`solve_smoluchowski`.

    Raises:
        DegenerateDensityError: Початкова густина не строго додатна.
        StepSizeError: Порушено межу Δr⁴/(8ν) або межу запізнення.
        SchemeFailureError: Втрата додатності густини.
    """
    if dt is None:
        dt = _default_dt(
            t_end, _scheme_minimum_step(params, quantum_correction, scheme), bohm_step_bound(rho0.grid, params)
        )
    solver = SmoluchowskiSolver(
        rho0.grid, potential, params, dt, quantum_correction, bohm=BOHM_NONLINEAR, scheme=scheme
    )
    return solver.run(rho0, t_end, record_every)


def solve_smoluchowski_linearized(
    rho0: DensityField,
    params: BathParams,
    t_end: float,
    potential: Optional[Potential] = None,
    quantum_correction: bool = False,
    dt: Optional[float] = None,
    record_every: int = 1,
    scheme: str = SCHEME_BRANCH,
) -> DensitySeries:
    """Лінеаризоване рівняння з членом -ℏ²∂_r⁴ρ/(4m) замість потенціалу Бома.

    Четверта різниця входить у генератор, тому крок не обмежений Δr⁴.
    Потрібна періодична сітка.
    """
    pot = Free() if potential is None else potential
    if dt is None:
        dt = _default_dt(t_end, _scheme_minimum_step(params, quantum_correction, scheme))
    solver = SmoluchowskiSolver(rho0.grid, pot, params, dt, quantum_correction, bohm=BOHM_LINEAR, scheme=scheme)
    return solver.run(rho0, t_end, record_every)
