"""Командний рядок: реєстр підкоманд, диспетчер, обробники та маніфест запуску."""

from . import command_handlers  # noqa: F401  реєструє підкоманди
from .command_dispatcher import EXIT_NUMERICAL, EXIT_SUCCESS, EXIT_VALIDATION, CommandDispatcher
from .command_registry import get_command, get_registry, register_command
from .run_manifest import MANIFEST_NAME, RunManifest, file_digest


__all__ = [
    "CommandDispatcher",
    "EXIT_SUCCESS",
    "EXIT_VALIDATION",
    "EXIT_NUMERICAL",
    "register_command",
    "get_command",
    "get_registry",
    "RunManifest",
    "MANIFEST_NAME",
    "file_digest",
]
