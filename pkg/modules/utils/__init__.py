"""Утилітарні модулі: конфігурація та запис результатів."""

from .config_manager import ConfigManager, RunConfig, deep_merge, parse_value
from .data_writer import format_value, read_csv, write_csv, write_json


__all__ = [
    "ConfigManager",
    "RunConfig",
    "deep_merge",
    "parse_value",
    "write_csv",
    "read_csv",
    "write_json",
    "format_value",
]
