"""Маніфест запуску: знімок конфігурації, зерна, час, діагностика та індекс файлів."""

import hashlib
import json
import logging
import os
import time
from datetime import datetime
from typing import Dict, List, Optional

from modules.utils.data_writer import write_json


# Налаштування логування
logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TOOL_NAME = "quantum_bath_brownian"
TOOL_VERSION = "0.1.0"


def file_digest(path: str) -> str:
    """sha256 вмісту файлу."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunManifest:
    """Накопичує відомості про запуск і зберігає їх у ``manifest.json``."""

    def __init__(self, command: str, output_dir: str, config: Dict[str, object], seed: int) -> None:
        self.command = command
        self.output_dir = output_dir
        self.config = config
        self.seeds: List[int] = [seed]
        self.status = "pending"
        self.message = ""
        self.started = datetime.now().isoformat()
        self.finished: Optional[str] = None
        self._clock = time.perf_counter()
        self.wall_seconds = 0.0
        self.diagnostics: Dict[str, object] = {}
        self.warnings: List[str] = []
        self.outputs: Dict[str, str] = {}

    def add_output(self, path: str) -> None:
        """Додає файл до індексу з його sha256."""
        name = os.path.relpath(path, self.output_dir)
        self.outputs[name] = file_digest(path)

    def mark_completed(self, result: Dict[str, object]) -> None:
        self._finish(str(result.get("status", "success")), str(result.get("message", "")))
        self.diagnostics.update(result.get("diagnostics", {}))  # type: ignore[arg-type]
        self.warnings.extend(result.get("warnings", []))  # type: ignore[arg-type]

    def mark_failed(self, error: Dict[str, object]) -> None:
        self._finish("error", str(error.get("message", "")))
        self.diagnostics["error"] = error

    def _finish(self, status: str, message: str) -> None:
        self.status = status
        self.message = message
        self.finished = datetime.now().isoformat()
        self.wall_seconds = time.perf_counter() - self._clock

    def to_dict(self) -> Dict[str, object]:
        return {
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "command": self.command,
            "status": self.status,
            "message": self.message,
            "config": self.config,
            "seeds": self.seeds,
            "timing": {"started": self.started, "finished": self.finished, "wall_seconds": self.wall_seconds},
            "diagnostics": self.diagnostics,
            "warnings": self.warnings,
            "outputs": self.outputs,
        }

    def save(self) -> str:
        """Зберігає маніфест у теці виводу."""
        path = write_json(os.path.join(self.output_dir, MANIFEST_NAME), self.to_dict())
        logger.info(f"Маніфест збережено у {path}")
        return path

    @staticmethod
    def load(path: str) -> Dict[str, object]:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
