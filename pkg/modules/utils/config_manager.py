"""Модуль управління конфігурацією запусків qbath."""

import copy
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional

import jsonschema

from modules.core.constants import constants
from modules.core.errors import ConfigValidationError
from modules.core.grids import SpaceGrid, TimeGrid
from modules.core.params import BathParams


# Налаштування логування
logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
SCHEMA_PATH = PROJECT_ROOT / "schemas" / "run_config_schema.json"
OUTPUT_ROOT_ENV = "QBATH_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "out"

DEFAULT_CONFIG: Dict[str, object] = {
    "units": "reduced",
    "seed": 0,
    "threads": 1,
    "params": {"m": 1.0, "gamma": 1.0, "tau": 0.0, "T": 1.0, "hbar": 1.0, "d": 1},
    "time_grid": {"t0": 0.0, "dt": 0.01, "n": 65536},
    "space_grid": {"length": 12.0, "points": 128, "periodic": True},
    "noise": {"cutoff": None, "realizations": 16, "components": None, "bands": 32},
    "langevin": {
        "potential": {"kind": "free"},
        "cutoff": None,
        "cutoff_factor": 1.0,
        "realizations": 64,
        "burn_in": None,
        "blocks": 32,
        "tolerance_se": 3.0,
    },
    "cutoff": {"theta_min": 0.01, "theta_max": 10.0, "points": 25, "mean_free_path": None},
    "dispersion": {"omega_min": 1e-3, "omega_max": 1e3, "points": 61},
    "kramers": {
        "potential": {"kind": "harmonic", "stiffness": 1.0},
        "initial": {"kind": "maxwell_boltzmann"},
        "t_end": 1.0,
        "dt": None,
        "quantum_correction": False,
        "p_extent": 6.0,
        "p_points": 64,
        "record_every": 10,
        "residual_tolerance": 1e-8,
    },
    "smoluchowski": {
        "variant": "classical",
        "potential": {"kind": "harmonic", "stiffness": 1.0},
        "initial": {"kind": "gaussian", "center": 1.0, "width": 0.5},
        "t_end": 5.0,
        "dt": None,
        "scheme": "branch",
        "quantum_correction": False,
        "record_every": 10,
    },
    "constants": {"masses": [9.1093837015e-31], "gammas": [1.0e12]},
}


def deep_merge(base: Mapping[str, object], overlay: Mapping[str, object]) -> Dict[str, object]:
    """Рекурсивно накладає ``overlay`` на копію ``base``."""
    merged = copy.deepcopy(dict(base))
    for key, value in overlay.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)  # type: ignore[arg-type]
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def parse_value(text: str) -> object:
    """Розбирає значення перевизначення як JSON, інакше повертає рядок."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


@dataclass(frozen=True)
class RunConfig:
    """Незмінна конфігурація одного запуску підкоманди."""

    command: str
    params: BathParams
    time_grid: TimeGrid
    space_grid: SpaceGrid
    section: Dict[str, object]
    seed: int
    threads: int
    output_dir: str
    raw: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        """Повний словник конфігурації (для маніфесту та повторного розбору)."""
        return copy.deepcopy(self.raw)


class ConfigManager:
    """Клас для управління конфігурацією."""

    def __init__(self, config_file: Optional[str] = None, schema_file: Optional[str] = None) -> None:
        self.config_file = config_file
        self.schema_file = schema_file or str(SCHEMA_PATH)
        self.config = self._load_config()
        logger.info(f"ConfigManager ініціалізовано з файлу {config_file or '<замовчування>'}")

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "ConfigManager":
        """Створює менеджер із готового словника (поверх значень за замовчуванням)."""
        manager = cls()
        manager.config = deep_merge(DEFAULT_CONFIG, data)
        return manager

    def _load_config(self) -> Dict[str, object]:
        """Завантажує конфігурацію з файлу поверх значень за замовчуванням."""
        config = copy.deepcopy(DEFAULT_CONFIG)
        if not self.config_file:
            return config
        if not os.path.exists(self.config_file):
            raise ConfigValidationError(f"Файл конфігурації '{self.config_file}' не знайдено", "$")
        try:
            with open(self.config_file, "r", encoding="utf-8") as f:
                loaded = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigValidationError(f"Помилка розбору JSON у {self.config_file}: {e}", "$") from e
        if not isinstance(loaded, dict):
            raise ConfigValidationError("Корінь конфігурації має бути об'єктом", "$")
        logger.info(f"Конфігурацію завантажено з {self.config_file}")
        return deep_merge(config, loaded)

    def save_config(self, path: Optional[str] = None) -> None:
        """Зберігає конфігурацію у файл."""
        target = path or self.config_file
        if not target:
            raise ConfigValidationError("Не вказано файл для збереження конфігурації", "$")
        with open(target, "w", encoding="utf-8") as f:
            json.dump(self.config, f, indent=2, ensure_ascii=False, sort_keys=True)
        logger.info(f"Конфігурацію збережено у {target}")

    def get(self, key: str, default: Optional[object] = None) -> object:
        """Отримує значення параметра конфігурації (підтримуються ключі через крапку)."""
        value: object = self.config
        for part in key.split("."):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                return default
        return value

    def set(self, key: str, value: object) -> None:
        """Встановлює значення параметра конфігурації (ключі через крапку)."""
        parts = key.split(".")
        config = self.config
        for part in parts[:-1]:
            if not isinstance(config.get(part), dict):
                config[part] = {}
            config = config[part]  # type: ignore[assignment]
        config[parts[-1]] = value

    def apply_overrides(self, overrides: List[str]) -> None:
        """Застосовує перевизначення виду ``a.b=value``."""
        for item in overrides:
            if "=" not in item:
                raise ConfigValidationError(f"Перевизначення '{item}' має вигляд KEY=VALUE", item)
            key, text = item.split("=", 1)
            self.set(key.strip(), parse_value(text.strip()))
            logger.debug(f"Перевизначено {key.strip()} = {text.strip()}")

    def validate(self) -> None:
        """Перевіряє конфігурацію за JSON-схемою.

        Raises:
            ConfigValidationError: З JSON-шляхом до поля, що не пройшло перевірку.
        """
        with open(self.schema_file, "r", encoding="utf-8") as f:
            schema = json.load(f)
        try:
            jsonschema.validate(instance=self.config, schema=schema)
        except jsonschema.ValidationError as e:
            path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
            logger.error(f"Конфігурація не пройшла перевірку: {path}: {e.message}")
            raise ConfigValidationError(e.message, path) from e

    def bath_params(self) -> BathParams:
        """Параметри термостата у внутрішніх одиницях (k_B = 1).

        У режимі ``SI`` температура задається в кельвінах і переводиться в Дж.
        """
        values = dict(self.get("params", {}))  # type: ignore[arg-type]
        if self.get("units") == "SI":
            values["T"] = constants().kelvin_to_energy(float(values["T"]))
        try:
            return BathParams.from_dict(values)
        except ValueError as e:
            raise ConfigValidationError(str(e), "$.params") from e

    def output_root(self, override: Optional[str] = None) -> str:
        """Корінь виводу: прапорець, змінна середовища або ``out``."""
        return override or os.environ.get(OUTPUT_ROOT_ENV) or DEFAULT_OUTPUT_ROOT

    def build_run_config(self, command: str, output_dir: Optional[str] = None) -> RunConfig:
        """Будує незмінну конфігурацію запуску для підкоманди."""
        time_grid = TimeGrid(**self.get("time_grid"))  # type: ignore[arg-type]
        space_grid = SpaceGrid(**self.get("space_grid"))  # type: ignore[arg-type]
        section = copy.deepcopy(self.get(command, {}))
        return RunConfig(
            command=command,
            params=self.bath_params(),
            time_grid=time_grid,
            space_grid=space_grid,
            section=section,  # type: ignore[arg-type]
            seed=int(self.get("seed", 0)),  # type: ignore[arg-type]
            threads=int(self.get("threads", 1)),  # type: ignore[arg-type]
            output_dir=output_dir or os.path.join(self.output_root(), command),
            raw=copy.deepcopy(self.config),
        )
