"""Історія часових рівнів для запізнених оцінок другої похідної за часом."""

from collections import deque
from typing import Deque, Optional

import numpy as np


class LaggedHistory:
    """Кільцевий буфер останніх рівнів X^n, X^{n-1}, ...

    ``second_difference`` повертає (X^{n-o} - 2X^{n-o-k} + X^{n-o-2k})/(k·dt)²,
    де o є зсувом, а k кроком запізнення; поки історії не вистачає, повертає None.
    """

    def __init__(self, lag: int = 1, offset: int = 0) -> None:
        self.lag = max(1, int(lag))
        self.offset = max(0, int(offset))
        self._levels: Deque[np.ndarray] = deque(maxlen=2 * self.lag + self.offset + 1)

    def push(self, value: np.ndarray) -> None:
        self._levels.appendleft(np.array(value, dtype=float, copy=True))

    def __len__(self) -> int:
        return len(self._levels)

    def ready(self) -> bool:
        return len(self._levels) == self._levels.maxlen

    def second_difference(self, dt: float) -> Optional[np.ndarray]:
        if not self.ready():
            return None
        o, k = self.offset, self.lag
        levels = self._levels
        return (levels[o] - 2.0 * levels[o + k] + levels[o + 2 * k]) / (k * dt) ** 2
