"""Спеціальні функції: стійкий coth, x·coth(x) та парні числа Бернуллі."""

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Tuple, Union

import numpy as np

from modules.core.errors import ArgumentError, DomainError


# Налаштування логування
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Нижче цього порогу coth та x·coth(x) рахуються через ряд Лорана.
COTH_SERIES_THRESHOLD = 1e-4
BERNOULLI_MAX_ORDER = 30


def coth_stable(x: ArrayLike) -> ArrayLike:
    """Обчислює coth(x) без втрати точності поблизу нуля.

    Для |x| < 1e-4 використовується 1/x + x/3 - x³/45, інакше 1/tanh(x).
    Значення рахуються для |x| і отримують знак x, тому непарність точна.

    Args:
        x: Скаляр або масив скінченних ненульових значень.

    Returns:
        coth(x) тієї ж форми, що й вхід.

    Raises:
        DomainError: Якщо хоч один елемент дорівнює нулю або не скінченний.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("coth_stable очікує скінченні аргументи")
    if np.any(arr == 0.0):
        raise DomainError("coth(0) не визначений; використовуйте x_coth для границі x·coth(x)")
    ax = np.abs(arr)
    small = ax < COTH_SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        result = np.where(small, 1.0 / ax + ax / 3.0 - ax**3 / 45.0, 1.0 / np.tanh(ax))
    result = np.copysign(result, arr)
    return float(result) if np.ndim(x) == 0 else result


def x_coth(x: ArrayLike) -> ArrayLike:
    """Повертає x·coth(x) з границею 1 при x → 0.

    Функція парна; для малих |x| використовується 1 + x²/3 - x⁴/45.
    """
    arr = np.abs(np.asarray(x, dtype=float))
    small = arr < COTH_SERIES_THRESHOLD
    safe = np.where(small, 1.0, arr)
    result = np.where(small, 1.0 + arr**2 / 3.0 - arr**4 / 45.0, safe / np.tanh(safe))
    return float(result) if np.ndim(x) == 0 else result


@lru_cache(maxsize=1)
def _bernoulli_table(max_index: int) -> Tuple[Fraction, ...]:
    """Точні B_0..B_max_index за рекурентністю Σ C(m+1, k) B_k = 0."""
    table: List[Fraction] = [Fraction(1)]
    for m in range(1, max_index + 1):
        acc = sum((comb(m + 1, k) * table[k] for k in range(m)), Fraction(0))
        table.append(-acc / (m + 1))
    logger.debug(f"Обчислено таблицю чисел Бернуллі до B_{max_index}")
    return tuple(table)


def bernoulli_even(n_max: int) -> List[Fraction]:
    """Повертає точні парні числа Бернуллі B_0, B_2, ..., B_{2·n_max}.

    Args:
        n_max: Кількість парних членів після B_0, не більше 30.

    Returns:
        Список раціональних чисел довжиною n_max + 1.

    Raises:
        ArgumentError: Якщо n_max від'ємний або більший за 30.
    """
    if n_max < 0 or n_max > BERNOULLI_MAX_ORDER:
        raise ArgumentError(f"n_max має бути в межах [0, {BERNOULLI_MAX_ORDER}], отримано {n_max}")
    table = _bernoulli_table(2 * BERNOULLI_MAX_ORDER)
    return [table[2 * n] for n in range(n_max + 1)]


def bernoulli_even_float(n_max: int) -> np.ndarray:
    """Парні числа Бернуллі як масив float64."""
    return np.array([float(b) for b in bernoulli_even(n_max)])
