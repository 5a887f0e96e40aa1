"""Реєстр обробників підкоманд CLI."""

import logging
from typing import Callable, Dict


# Налаштування логування
logger = logging.getLogger(__name__)

# Глобальний реєстр обробників: {назва_підкоманди: функція}
_command_registry: Dict[str, Callable[..., Dict[str, object]]] = {}


def register_command(name: str) -> Callable:
    """Декоратор, що реєструє функцію як обробник підкоманди.

    Args:
        name: Назва підкоманди (наприклад, ``"noise"`` або ``"kramers"``).

    Returns:
        Декоратор, що повертає функцію без змін.
    """

    def decorator(func: Callable[..., Dict[str, object]]) -> Callable[..., Dict[str, object]]:
        if name in _command_registry:
            logger.warning(f"Обробник підкоманди '{name}' перевизначено функцією {func.__name__}")
        _command_registry[name] = func
        logger.debug(f"Підкоманду '{name}' зареєстровано: {func.__name__}")
        return func

    return decorator


def get_command(name: str) -> Callable[..., Dict[str, object]]:
    """Повертає обробник підкоманди.

    Raises:
        KeyError: Якщо підкоманду не зареєстровано.
    """
    if name not in _command_registry:
        raise KeyError(f"Підкоманду '{name}' не зареєстровано. Доступні: {sorted(_command_registry)}")
    return _command_registry[name]


def get_registry() -> Dict[str, Callable[..., Dict[str, object]]]:
    """Копія всього реєстру."""
    return _command_registry.copy()
