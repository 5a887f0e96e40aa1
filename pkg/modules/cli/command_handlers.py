"""Обробники підкоманд qbath.

Кожен обробник отримує :class:`RunConfig`, пише CSV у ``config.output_dir`` і
повертає словник ``{"status", "message", "files", "diagnostics", "warnings"}``.
``status == "failed"`` означає, що не пройдено заявлений поріг діагностики.
"""

import logging
import math
import os
from typing import Dict, List, Tuple

import numpy as np

from modules.analysis import (
    collision_cutoff,
    collision_friction,
    dispersion_q2,
    momentum_dispersion_integral,
    solve_cutoff,
    universal_TD,
    weak_coupling_cutoff,
)
from modules.cli.command_registry import register_command
from modules.core.constants import constants
from modules.core.errors import ConfigValidationError
from modules.core.params import BathParams
from modules.langevin import (
    Free,
    boltzmann_chi_square,
    momentum_dispersion_empirical,
    potential_from_config,
    run_ensemble,
)
from modules.noise import fdt_spectral_density, force_variance, periodogram, sample_noise_batch
from modules.pde import (
    DensityField,
    MomentumGrid,
    boltzmann_density,
    extract_moments,
    free_mode_evolution,
    maxwell_boltzmann,
    mode_amplitude,
    mode_decay_rate,
    residual_continuity,
    residual_force_balance,
    single_mode_density,
    solve_kramers,
    solve_smoluchowski,
    solve_smoluchowski_linearized,
    solve_smoluchowski_quantum,
)
from modules.utils.config_manager import RunConfig
from modules.utils.data_writer import write_csv, write_json


# Налаштування логування
logger = logging.getLogger(__name__)

NOISE_VARIANCE_TOLERANCE = 0.05
CUTOFF_RESIDUAL_TOLERANCE = 1e-10
ESTIMATE_BAND = (0.5, 2.0)
DISPERSION_RESIDUAL_TOLERANCE = 1e-10
CONSTANTS_TOLERANCE = 1e-10
MASS_TOLERANCE = 1e-9
EQUILIBRIUM_TOLERANCE = 1e-6
MODE_RATE_TOLERANCE = 0.01
CHI_SQUARE_LEVEL = 0.01


def _result(status: str, message: str, files: List[str], diagnostics: Dict[str, object], warnings=None):
    return {
        "status": status,
        "message": message,
        "files": files,
        "diagnostics": diagnostics,
        "warnings": list(warnings or []),
    }


def resolve_cutoff(section: Dict[str, object], params: BathParams, nyquist: float) -> Tuple[float, str]:
    """Частота обрізання: явна, розв'язок рівняння для Ω (×cutoff_factor) або Найквіст при ℏ = 0."""
    explicit = section.get("cutoff")
    if explicit is not None:
        return float(explicit), "config"  # type: ignore[arg-type]
    if params.hbar == 0.0:
        return nyquist, "nyquist"
    factor = float(section.get("cutoff_factor", 1.0))  # type: ignore[arg-type]
    return factor * solve_cutoff(params).omega, "solved"


@register_command("noise")
def cmd_noise(config: RunConfig) -> Dict[str, object]:
    """Синтезує реалізації шуму і порівнює періодограму з S_FF."""
    section, params, grid = config.section, config.params, config.time_grid
    cutoff, source = resolve_cutoff(section, params, grid.nyquist)
    realizations = int(section.get("realizations", 16))  # type: ignore[arg-type]
    components = section.get("components")
    bands = int(section.get("bands", 32))  # type: ignore[arg-type]
    trajectories = sample_noise_batch(
        grid, params, cutoff, config.seed, list(range(realizations)), components, config.threads  # type: ignore[arg-type]
    )
    estimate = periodogram(trajectories, bands, reference=lambda w: fdt_spectral_density(w, params))

    rows = []
    for row in estimate.to_rows():
        below = row["omega_max"] <= cutoff
        rows.append(
            [
                row["omega"],
                row["omega_min"],
                row["omega_max"],
                row["power"],
                row["stderr"],
                float(fdt_spectral_density(row["omega"], params)) if below else 0.0,
                row["ratio"] if below else math.nan,
                row["ratio_stderr"] if below else math.nan,
            ]
        )
    metadata = {**trajectories[0].header(), "realizations": realizations, "bands": bands}
    files = [
        write_csv(
            os.path.join(config.output_dir, "noise_spectrum.csv"),
            ["omega", "omega_min", "omega_max", "power", "stderr", "s_ff", "ratio", "ratio_stderr"],
            rows,
            metadata,
        )
    ]
    first = trajectories[0]
    columns = ["t"] + [f"F{k}" for k in range(first.components)]
    files.append(
        write_csv(
            os.path.join(config.output_dir, "noise_sample.csv"),
            columns,
            ([t, *first.samples[j]] for j, t in enumerate(grid.times)),
            first.header(),
        )
    )

    expected = force_variance(cutoff, params)
    deviation = abs(estimate.total_power / expected - 1.0) if expected > 0 else math.inf
    diagnostics = {
        "cutoff": cutoff,
        "cutoff_source": source,
        "total_power": estimate.total_power,
        "force_variance": expected,
        "variance_deviation": deviation,
    }
    status = "success" if deviation < NOISE_VARIANCE_TOLERANCE else "failed"
    return _result(status, f"Дисперсія шуму відхиляється на {deviation:.2%}", files, diagnostics)


@register_command("langevin")
def cmd_langevin(config: RunConfig) -> Dict[str, object]:
    """Ансамбль траєкторій Ланжевена: ⟨P²⟩, гістограма положень і прогноз квадратури."""
    section, params, grid = config.section, config.params, config.time_grid
    potential = potential_from_config(section.get("potential", {"kind": "free"}))  # type: ignore[arg-type]
    cutoff, source = resolve_cutoff(section, params, grid.nyquist)
    realizations = int(section.get("realizations", 64))  # type: ignore[arg-type]
    stats = run_ensemble(
        potential,
        params,
        grid,
        cutoff,
        range(realizations),
        burn_in=section.get("burn_in"),  # type: ignore[arg-type]
        seed=config.seed,
        blocks=int(section.get("blocks", 32)),  # type: ignore[arg-type]
        threads=config.threads,
    )
    mean, se = momentum_dispersion_empirical(stats)
    prediction = momentum_dispersion_integral(cutoff, params)
    chi2, p_value = boltzmann_chi_square(stats, potential, params)

    obs_rows = [
        [name, o.mean, o.dispersion, o.standard_error, o.block_count] for name, o in stats.observables.items()
    ]
    metadata = {"cutoff": cutoff, "cutoff_source": source, "realizations": realizations, "burn_in": stats.burn_in}
    files = [
        write_csv(
            os.path.join(config.output_dir, "langevin_observables.csv"),
            ["observable", "mean", "dispersion", "stderr", "blocks"],
            obs_rows,
            metadata,
        )
    ]
    edges, counts = stats.histogram_edges, stats.histogram_counts
    files.append(
        write_csv(
            os.path.join(config.output_dir, "position_histogram.csv"),
            ["r_min", "r_max", "count"],
            ([edges[k], edges[k + 1], int(counts[k])] for k in range(counts.size)),
            {"chi_square": chi2, "p_value": p_value},
        )
    )

    z_score = (mean - prediction) / se if se > 0 else math.inf
    tolerance = float(section.get("tolerance_se", 3.0))  # type: ignore[arg-type]
    diagnostics = {
        "momentum_dispersion": mean,
        "momentum_dispersion_stderr": se,
        "quadrature_prediction": prediction,
        "equipartition": params.d * params.m * params.T,
        "z_score": z_score,
        "chi_square": chi2,
        "chi_square_p_value": p_value,
        **{k: v for k, v in stats.to_dict().items() if k in ("burn_in", "realization_count")},
    }
    passed = True
    if isinstance(potential, Free):
        passed = abs(z_score) <= tolerance
    elif params.hbar == 0.0:
        passed = p_value >= CHI_SQUARE_LEVEL
    message = f"⟨P²⟩ = {mean:.6g} ± {se:.2g}, прогноз квадратури {prediction:.6g}"
    return _result("success" if passed else "failed", message, files, diagnostics, stats.warnings)


@register_command("cutoff")
def cmd_cutoff(config: RunConfig) -> Dict[str, object]:
    """Розгортка частоти зрізу за θ = βℏγ."""
    section, params = config.section, config.params
    thetas = np.geomspace(
        float(section.get("theta_min", 0.01)),  # type: ignore[arg-type]
        float(section.get("theta_max", 10.0)),  # type: ignore[arg-type]
        int(section.get("points", 25)),  # type: ignore[arg-type]
    )
    rows, worst, outside = [], 0.0, []
    for theta in thetas:
        point = params.with_(hbar=float(theta) * params.T / params.gamma)
        result = solve_cutoff(point)
        closure = momentum_dispersion_integral(result.omega, point) / (point.d * point.m * point.T) - 1.0
        worst = max(worst, result.residual)
        in_band = ESTIMATE_BAND[0] <= result.ratio <= ESTIMATE_BAND[1]
        if not in_band:
            outside.append(float(theta))
        weak = weak_coupling_cutoff(point) / result.estimate
        rows.append([float(theta), result.omega, result.estimate, result.ratio, weak, in_band, result.residual, closure])
    files = [
        write_csv(
            os.path.join(config.output_dir, "cutoff_sweep.csv"),
            ["theta", "omega", "estimate", "ratio", "weak_coupling_ratio", "in_band", "residual", "closure"],
            rows,
            params.to_dict(),
        )
    ]
    ratios = [row[3] for row in rows]
    diagnostics: Dict[str, object] = {
        "max_residual": worst,
        "ratio_range": [min(ratios), max(ratios)],
        "theta_outside_band": outside,
    }
    warnings = []
    if outside:
        warnings.append(
            f"Ω/sqrt(2πγT/ℏ) поза [{ESTIMATE_BAND[0]}, {ESTIMATE_BAND[1]}] для {len(outside)} точок, "
            f"θ <= {max(outside):.3g}; максимум {max(ratios):.3g}"
        )
        logger.warning(warnings[-1])
    mean_free_path = section.get("mean_free_path")
    if mean_free_path is not None:
        lam = float(mean_free_path)  # type: ignore[arg-type]
        gamma = collision_friction(lam, params)
        collision = params.with_(gamma=gamma)
        diagnostics["collision"] = {
            "mean_free_path": lam,
            "gamma": gamma,
            "collision_cutoff": collision_cutoff(lam, params),
            "solved_cutoff": solve_cutoff(collision).omega if params.hbar > 0 else math.inf,
        }
    status = "success" if worst < CUTOFF_RESIDUAL_TOLERANCE else "failed"
    return _result(status, f"{len(rows)} точок, макс. нев'язка {worst:.2e}", files, diagnostics, warnings)


@register_command("dispersion")
def cmd_dispersion(config: RunConfig) -> Dict[str, object]:
    """Таблиця коренів q²(ω) для обох гілок."""
    section, params = config.section, config.params
    omegas = np.geomspace(
        float(section.get("omega_min", 1e-3)),  # type: ignore[arg-type]
        float(section.get("omega_max", 1e3)),  # type: ignore[arg-type]
        int(section.get("points", 61)),  # type: ignore[arg-type]
    )
    rows, worst = [], 0.0
    for omega in omegas:
        solution = dispersion_q2(float(omega), params)
        worst = max(worst, solution.residual)
        row = solution.to_row()
        rows.append([row[k] for k in ("omega", "re_q2", "im_q2", "re_q2_alt", "im_q2_alt", "residual")])
    files = [
        write_csv(
            os.path.join(config.output_dir, "dispersion.csv"),
            ["omega", "re_q2", "im_q2", "re_q2_alt", "im_q2_alt", "residual"],
            rows,
            params.to_dict(),
        )
    ]
    status = "success" if worst < DISPERSION_RESIDUAL_TOLERANCE else "failed"
    return _result(status, f"{len(rows)} частот, макс. нев'язка {worst:.2e}", files, {"max_residual": worst})


def initial_density(spec: Dict[str, object], potential, params: BathParams, grid) -> DensityField:
    """Початкова густина з секції ``initial``: gaussian, mode або boltzmann."""
    kind = str(spec.get("kind", "gaussian"))
    if kind == "gaussian":
        center = float(spec.get("center", 0.0))  # type: ignore[arg-type]
        width = float(spec.get("width", 1.0))  # type: ignore[arg-type]
        return DensityField(np.exp(-0.5 * ((grid.r - center) / width) ** 2), grid).normalized()
    if kind == "mode":
        q = 2.0 * math.pi * int(spec.get("mode", 1)) / grid.length  # type: ignore[arg-type]
        return single_mode_density(grid, q, float(spec.get("amplitude", 0.1)))  # type: ignore[arg-type]
    if kind in ("boltzmann", "maxwell_boltzmann"):
        return boltzmann_density(potential, params, grid)
    raise ConfigValidationError(f"Невідомий тип початкових даних '{kind}'", "initial.kind")


def _snapshot_files(output_dir: str, prefix: str, columns: List[str], snapshots) -> List[str]:
    files = []
    for index, (time, table) in enumerate(snapshots):
        files.append(
            write_csv(
                os.path.join(output_dir, "snapshots", f"{prefix}_{index:04d}.csv"),
                columns,
                table,
                {"t": time},
            )
        )
    return files


@register_command("kramers")
def cmd_kramers(config: RunConfig) -> Dict[str, object]:
    """Розв'язує рівняння Клейна-Крамерса і пише зрізи моментів та нев'язки."""
    section, params, grid = config.section, config.params, config.space_grid
    potential = potential_from_config(section.get("potential", {"kind": "free"}))  # type: ignore[arg-type]
    momentum = MomentumGrid(
        float(section.get("p_extent", 6.0)) * math.sqrt(params.m * params.T),  # type: ignore[arg-type]
        int(section.get("p_points", 64)),  # type: ignore[arg-type]
    )
    spec = dict(section.get("initial", {"kind": "maxwell_boltzmann"}))  # type: ignore[arg-type]
    density = initial_density(spec, potential, params, grid)
    width = float(spec.get("momentum_width", math.sqrt(params.m * params.T)))  # type: ignore[arg-type]
    local = params.with_(T=width**2 / params.m)
    f0 = maxwell_boltzmann(
        potential, local, grid, momentum, float(spec.get("momentum_shift", 0.0)), density.values  # type: ignore[arg-type]
    )
    series = solve_kramers(
        f0,
        potential,
        params,
        float(section.get("t_end", 1.0)),  # type: ignore[arg-type]
        bool(section.get("quantum_correction", False)),
        section.get("dt"),  # type: ignore[arg-type]
        int(section.get("record_every", 10)),  # type: ignore[arg-type]
    )
    snapshots = []
    for k in range(len(series)):
        moments = extract_moments(series[k], params.m)
        snapshots.append(
            (
                float(series.times[k]),
                zip(grid.r, moments.density, moments.velocity, moments.pressure),
            )
        )
    files = _snapshot_files(config.output_dir, "kramers", ["r", "rho", "V", "Pi"], snapshots)
    diagnostics = dict(series.diagnostics)
    if len(series) >= 3:
        diagnostics["continuity_residual"] = residual_continuity(series, params.m)
        diagnostics["force_balance_residual"] = residual_force_balance(series, potential, params)
    steps = int(diagnostics["steps"])  # type: ignore[arg-type]
    drift = float(diagnostics["mass_drift"]) / f0.mass  # type: ignore[arg-type]
    passed = drift < MASS_TOLERANCE
    if spec.get("kind") == "maxwell_boltzmann" and "momentum_width" not in spec and "momentum_shift" not in spec:
        per_step = float(np.max(np.abs(series.final.values - f0.values)) / np.max(f0.values)) / steps
        diagnostics["stationarity_residual_per_step"] = per_step
        passed = passed and per_step < float(section.get("residual_tolerance", 1e-8))  # type: ignore[arg-type]
    files.append(write_json(os.path.join(config.output_dir, "kramers_diagnostics.json"), diagnostics))
    return _result("success" if passed else "failed", f"Крамерс: {steps} кроків", files, diagnostics)


@register_command("smoluchowski")
def cmd_smoluchowski(config: RunConfig) -> Dict[str, object]:
    """Розв'язує рівняння Смолуховського (класичне, квантове або лінеаризоване)."""
    section, params, grid = config.section, config.params, config.space_grid
    potential = potential_from_config(section.get("potential", {"kind": "free"}))  # type: ignore[arg-type]
    spec = dict(section.get("initial", {"kind": "gaussian"}))  # type: ignore[arg-type]
    rho0 = initial_density(spec, potential, params, grid)
    variant = str(section.get("variant", "classical"))
    args = (
        float(section.get("t_end", 1.0)),  # type: ignore[arg-type]
        bool(section.get("quantum_correction", False)),
        section.get("dt"),
        int(section.get("record_every", 10)),  # type: ignore[arg-type]
    )
    if variant == "classical":
        series = solve_smoluchowski(rho0, potential, params, *args)  # type: ignore[arg-type]
    elif variant == "quantum":
        series = solve_smoluchowski_quantum(rho0, potential, params, *args)  # type: ignore[arg-type]
    elif variant == "linearized":
        series = solve_smoluchowski_linearized(rho0, params, args[0], potential, *args[1:])  # type: ignore[arg-type]
    else:
        raise ConfigValidationError(f"Невідомий варіант '{variant}'", "smoluchowski.variant")

    reference = boltzmann_density(potential, params, grid).values
    snapshots = [(float(series.times[k]), zip(grid.r, series.values[k], reference)) for k in range(len(series))]
    files = _snapshot_files(config.output_dir, "density", ["r", "rho", "boltzmann"], snapshots)
    summary = []
    for k in range(len(series)):
        snapshot = series[k]
        mean = float(grid.integrate(grid.r * snapshot.values) / snapshot.mass)
        variance = float(grid.integrate((grid.r - mean) ** 2 * snapshot.values) / snapshot.mass)
        summary.append([snapshot.time, snapshot.mass, mean, variance])
    files.append(
        write_csv(
            os.path.join(config.output_dir, "smoluchowski_summary.csv"),
            ["t", "mass", "mean", "variance"],
            summary,
            {"variant": variant, **params.to_dict()},
        )
    )
    diagnostics = dict(series.diagnostics)
    failures = []
    if spec.get("kind") == "mode" and isinstance(potential, Free):
        q = 2.0 * math.pi * int(spec.get("mode", 1)) / grid.length  # type: ignore[arg-type]
        order = "semiclassical" if args[1] else "classical"
        oracle = free_mode_evolution(grid.effective_wavenumber(q), params, order, bohm=variant != "classical")
        rate = mode_decay_rate(series, q)
        diagnostics["mode_rate"] = rate
        diagnostics["mode_root"] = oracle.report()
        diagnostics["mode_final_amplitude"] = mode_amplitude(series.final, q)
        mismatch = abs(rate - oracle.physical.real) / abs(oracle.physical.real)
        diagnostics["mode_rate_mismatch"] = mismatch
        # Нелінійний член Бома відхиляє моду від лінійного кореня на O(a²).
        if mismatch >= MODE_RATE_TOLERANCE and variant != "quantum":
            failures.append(f"швидкість моди відрізняється від кореня на {mismatch:.2%}")
    drift = float(diagnostics["mass_drift"]) / rho0.mass  # type: ignore[arg-type]
    if drift >= MASS_TOLERANCE:
        failures.append(f"дрейф маси {drift:.2e}")
    if spec.get("kind") == "boltzmann" and variant == "classical":
        deviation = float(diagnostics["boltzmann_deviation"])  # type: ignore[arg-type]
        if deviation >= EQUILIBRIUM_TOLERANCE:
            failures.append(f"відхилення від Больцмана {deviation:.2e}")
    files.append(write_json(os.path.join(config.output_dir, "smoluchowski_diagnostics.json"), diagnostics))
    if failures:
        logger.warning(f"Смолуховський ({variant}): {'; '.join(failures)}")
        return _result("failed", f"Смолуховський ({variant}): {'; '.join(failures)}", files, diagnostics)
    return _result("success", f"Смолуховський ({variant}): дрейф маси {drift:.2e}", files, diagnostics)


@register_command("constants")
def cmd_constants(config: RunConfig) -> Dict[str, object]:
    """Перевірка універсальності T*·D для набору мас і коефіцієнтів тертя (SI)."""
    section = config.section
    table = constants()
    rows, worst = [], 0.0
    for mass in section.get("masses", [9.1093837015e-31]):  # type: ignore[union-attr]
        for gamma in section.get("gammas", [1.0e12]):  # type: ignore[union-attr]
            result = universal_TD(BathParams(m=float(mass), gamma=float(gamma)), table)
            worst = max(worst, result.deviation)
            rows.append(
                [
                    result.mass,
                    result.gamma,
                    result.tau,
                    result.temperature,
                    result.diffusion,
                    result.product,
                    result.reference,
                    result.deviation,
                ]
            )
    files = [
        write_csv(
            os.path.join(config.output_dir, "universal_td.csv"),
            ["mass", "gamma", "tau", "T_star", "D", "product", "reference", "deviation"],
            rows,
            {"source": table.source},
        ),
        write_json(os.path.join(config.output_dir, "constants.json"), table.to_dict()),
    ]
    status = "success" if worst < CONSTANTS_TOLERANCE else "failed"
    return _result(status, f"Макс. відхилення T*·D від еталону {worst:.2e}", files, {"max_deviation": worst})
