"""Ієрархія винятків qbath.

Кожен виняток несе ``exit_code``, який диспетчер команд повертає процесу:
1 для помилок валідації параметрів, 2 для чисельних збоїв.
"""

from typing import Dict, Optional


class QBathError(Exception):
    """Базовий виняток пакета."""

    exit_code = 2

    def __init__(self, message: str, details: Optional[Dict[str, object]] = None) -> None:
        super().__init__(message)
        self.details: Dict[str, object] = dict(details or {})

    def to_dict(self) -> Dict[str, object]:
        """Серіалізує помилку для маніфесту запуску."""
        return {"type": type(self).__name__, "message": str(self), "exit_code": self.exit_code, **self.details}


class ParameterError(QBathError, ValueError):
    """Недопустимі вхідні параметри."""

    exit_code = 1


class ConfigValidationError(ParameterError):
    """Конфігурація не пройшла перевірку схемою; ``field`` вказує шлях до поля."""

    def __init__(self, message: str, field: str = "") -> None:
        super().__init__(f"{field}: {message}" if field else message, {"field": field})
        self.field = field


class ArgumentError(ParameterError):
    """Несумісні аргументи операції (різні сітки, перевищено ліміт)."""


class DomainError(ParameterError):
    """Аргумент поза областю визначення функції."""


class NumericalError(QBathError, RuntimeError):
    """Чисельна схема не змогла виконати обчислення."""

    exit_code = 2


class StepSizeError(NumericalError):
    """Порушено межу стійкості за кроком часу."""

    def __init__(self, message: str, suggested_dt: float) -> None:
        super().__init__(f"{message}; рекомендований dt = {suggested_dt:.6g}", {"suggested_dt": suggested_dt})
        self.suggested_dt = suggested_dt


class GridResolutionError(NumericalError):
    """Сітка не розділяє потрібну частоту."""

    def __init__(self, message: str, required_dt: float) -> None:
        super().__init__(f"{message}; потрібен dt <= {required_dt:.6g}", {"required_dt": required_dt})
        self.required_dt = required_dt


class SchemeFailureError(NumericalError):
    """Схема втратила додатність розв'язку."""

    def __init__(self, message: str, time: float) -> None:
        super().__init__(f"{message} (t = {time:.6g})", {"time": time})
        self.time = time


class DegenerateDensityError(NumericalError):
    """Густина надто мала для обчислення квантового потенціалу."""

    def __init__(self, message: str, cell: int) -> None:
        super().__init__(f"{message} (комірка {cell})", {"cell": cell})
        self.cell = cell


class BracketError(NumericalError):
    """Нев'язка не змінює знак на інтервалі пошуку кореня."""

    def __init__(self, message: str, bracket: tuple, residuals: tuple) -> None:
        super().__init__(
            f"{message}: [{bracket[0]:.6g}, {bracket[1]:.6g}] -> ({residuals[0]:.6g}, {residuals[1]:.6g})",
            {"bracket": list(bracket), "residuals": list(residuals)},
        )
        self.bracket = bracket
        self.residuals = residuals


class BranchSelectionError(NumericalError):
    """Обраний корінь не задовольняє рівняння після підстановки."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (нев'язка {residual:.3e})", {"residual": residual})
        self.residual = residual


class ContractViolationError(NumericalError):
    """Порушено контракт операції (наприклад, комплексний символ)."""
