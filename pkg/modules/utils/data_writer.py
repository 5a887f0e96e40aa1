"""Запис таблиць CSV з метаданими та JSON-документів результатів."""

import csv
import json
import logging
import math
import os
from typing import Iterable, Mapping, Optional, Sequence


# Налаштування логування
logger = logging.getLogger(__name__)


def format_value(value: object) -> str:
    """Форматує значення клітинки: float через repr (найкоротший точний запис)."""
    if hasattr(value, "item"):
        return format_value(value.item())  # type: ignore[union-attr]
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_csv(
    path: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    metadata: Optional[Mapping[str, object]] = None,
) -> str:
    """Записує таблицю з рядками ``# key: value`` перед заголовком.

    Returns:
        Шлях до записаного файлу.
    """
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        for key, value in (metadata or {}).items():
            f.write(f"# {key}: {format_value(value)}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"Рядок має {len(row)} значень, а заголовок {len(columns)}")
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.debug(f"Записано {count} рядків у {path}")
    return path


def read_csv(path: str):
    """Читає файл, записаний :func:`write_csv`: повертає (metadata, columns, rows)."""
    metadata = {}
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition(": ")
            metadata[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    return metadata, columns, [row for row in reader]


def _default(value: object) -> object:
    if hasattr(value, "tolist"):
        return value.tolist()  # type: ignore[union-attr]
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Об'єкт типу {type(value).__name__} не серіалізується в JSON")


def write_json(path: str, data: Mapping[str, object]) -> str:
    """Записує JSON з indent=2, ensure_ascii=False, sort_keys=True."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True, default=_default)
        f.write("\n")
    logger.debug(f"Записано JSON {path}")
    return path
