#!/usr/bin/env python3
"""Головний скрипт командного рядка qbath."""

import argparse
import copy
import logging
import logging.handlers
import os
import sys
from typing import List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv


# Додаємо поточну директорію до шляху пошуку модулів
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from modules.cli import EXIT_SUCCESS, EXIT_VALIDATION, CommandDispatcher  # noqa: E402
from modules.core.errors import ConfigValidationError, QBathError  # noqa: E402
from modules.utils.config_manager import ConfigManager  # noqa: E402


COMMANDS = ("noise", "langevin", "cutoff", "dispersion", "kramers", "smoluchowski", "constants")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(log_dir: str = "logs", debug_mode: bool = False) -> None:
    """Налаштовує логування у файл, файл помилок та консоль."""
    os.makedirs(log_dir, exist_ok=True)
    log_level = logging.DEBUG if debug_mode else logging.INFO

    # Ротуючий файл логів (10 файлів по 5MB)
    main_file_handler = logging.handlers.RotatingFileHandler(
        os.path.join(log_dir, "qbath.log"), maxBytes=5 * 1024 * 1024, backupCount=10, encoding="utf-8"
    )
    main_file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    main_file_handler.setLevel(log_level)

    # Окремий файл для помилок та попереджень
    error_file_handler = logging.FileHandler(os.path.join(log_dir, "qbath_errors.log"), mode="a", encoding="utf-8")
    error_file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    error_file_handler.setLevel(logging.WARNING)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    logging.basicConfig(
        level=log_level, handlers=[main_file_handler, error_file_handler, console_handler], force=True
    )
    logging.info("Логування налаштовано. Помилки та попередження дублюються в qbath_errors.log.")


# Налаштування логування
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Парсер аргументів з підкомандами."""
    parser = argparse.ArgumentParser(prog="qbath", description="Броунівський рух у квантовому термостаті")
    parser.add_argument("command", choices=COMMANDS, help="Підкоманда")
    parser.add_argument("--config", help="Шлях до файлу конфігурації JSON", default=None)
    parser.add_argument("--out", help="Корінь виводу (за замовчуванням $QBATH_OUTPUT_ROOT або out)", default=None)
    parser.add_argument("--seed", help="Базове зерно генератора", type=int, default=None)
    parser.add_argument("--threads", help="Кількість потоків", type=int, default=None)
    parser.add_argument("--sweep", help="Розгортка KEY=start:stop:steps", default=None)
    parser.add_argument("--set", help="Перевизначення KEY=VALUE (можна повторювати)", action="append", default=[])
    parser.add_argument("--log-dir", help="Тека для лог-файлів", default="logs")
    parser.add_argument("--debug", help="Увімкнути режим налагодження", action="store_true")
    return parser


def parse_sweep(text: str) -> Tuple[str, np.ndarray]:
    """Розбирає ``KEY=start:stop:steps`` у ключ і лінійну сітку значень (кінці включно)."""
    try:
        key, spec = text.split("=", 1)
        start, stop, steps = spec.split(":")
        values = np.linspace(float(start), float(stop), int(steps))
    except ValueError as e:
        raise ConfigValidationError(f"Розгортка '{text}' має вигляд KEY=start:stop:steps", "--sweep") from e
    if values.size < 1:
        raise ConfigValidationError("Розгортка має містити хоча б одну точку", "--sweep")
    return key.strip(), values


def run_command(args: argparse.Namespace) -> int:
    """Будує конфігурацію, виконує підкоманду (або розгортку) і повертає код виходу."""
    manager = ConfigManager(config_file=args.config)
    overrides: List[str] = list(args.set)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.threads is not None:
        overrides.append(f"threads={args.threads}")
    manager.apply_overrides(overrides)
    root = manager.output_root(args.out)
    dispatcher = CommandDispatcher()

    if not args.sweep:
        manager.validate()
        _, code = dispatcher.dispatch(manager.build_run_config(args.command, os.path.join(root, args.command)))
        return code

    key, values = parse_sweep(args.sweep)
    worst = EXIT_SUCCESS
    base = copy.deepcopy(manager.config)
    for index, value in enumerate(values):
        manager.config = copy.deepcopy(base)
        current = manager.get(key)
        manager.set(key, int(round(value)) if isinstance(current, int) and not isinstance(current, bool) else float(value))
        manager.validate()
        output_dir = os.path.join(root, args.command, f"sweep_{index}")
        logger.info(f"Розгортка {key}={value:.6g} ({index + 1}/{values.size})")
        _, code = dispatcher.dispatch(manager.build_run_config(args.command, output_dir))
        worst = max(worst, code)
    return worst


def main(argv: Optional[List[str]] = None) -> int:
    """Головна функція для запуску підкоманд."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging(args.log_dir, args.debug)
    logger.debug("Режим налагодження увімкнено" if args.debug else "Запуск у стандартному режимі.")
    try:
        return run_command(args)
    except QBathError as e:
        logger.error(f"Помилка: {e}")
        return e.exit_code
    except (OSError, ValueError) as e:
        logger.error(f"Помилка конфігурації: {e}", exc_info=True)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
