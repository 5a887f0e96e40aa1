"""Диспетчер підкоманд: виконує обробник, перетворює винятки на коди виходу та пише маніфест."""

import logging
import os
from typing import Dict, Tuple

from modules.cli.command_registry import get_command
from modules.cli.run_manifest import RunManifest
from modules.core.errors import QBathError
from modules.utils.config_manager import RunConfig


# Налаштування логування
logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class CommandDispatcher:
    """Диспетчер, який передає конфігурацію запуску зареєстрованому обробнику."""

    def dispatch(self, config: RunConfig) -> Tuple[Dict[str, object], int]:
        """Виконує підкоманду ``config.command``.

        Returns:
            Пара (результат обробника або опис помилки, код виходу).
        """
        os.makedirs(config.output_dir, exist_ok=True)
        manifest = RunManifest(config.command, config.output_dir, config.to_dict(), config.seed)
        try:
            handler = get_command(config.command)
        except KeyError as e:
            logger.error(str(e))
            error = {"status": "error", "message": str(e), "exit_code": EXIT_VALIDATION}
            manifest.mark_failed(error)
            manifest.save()
            return error, EXIT_VALIDATION

        try:
            logger.info(f"Виконання підкоманди '{config.command}' у {config.output_dir}")
            result = handler(config)
        except QBathError as e:
            logger.error(f"Підкоманда '{config.command}' завершилася з помилкою: {e}")
            error = {"status": "error", **e.to_dict()}
            manifest.mark_failed(error)
            manifest.save()
            return error, e.exit_code
        except Exception as e:
            logger.error(f"Непередбачена помилка в підкоманді '{config.command}': {e}", exc_info=True)
            error = {"status": "error", "message": str(e), "type": type(e).__name__}
            manifest.mark_failed(error)
            manifest.save()
            return error, EXIT_NUMERICAL

        for path in result.get("files", []):  # type: ignore[union-attr]
            manifest.add_output(str(path))
        manifest.mark_completed(result)
        manifest.save()
        if result.get("status") == "failed":
            logger.error(f"Підкоманда '{config.command}': {result.get('message')}")
            return result, EXIT_NUMERICAL
        logger.info(f"Підкоманда '{config.command}' завершена: {result.get('message', '')}")
        return result, EXIT_SUCCESS
