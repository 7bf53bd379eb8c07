from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform mesh ``y_j = y_a + j dy`` (0 <= j <= J), ``tau_n = n dtau`` (0 <= n <= N)."""

    y_a: float
    y_b: float
    J: int
    T: float
    N: int

    def __post_init__(self):
        errors = []
        if not self.y_a < self.y_b:
            errors.append(f"need y_a < y_b, got [{self.y_a}, {self.y_b}]")
        if self.J < 2:
            errors.append(f"need at least 2 space intervals, got J={self.J}")
        if not self.T > 0:
            errors.append(f"horizon T must be positive, got {self.T}")
        if self.N < 1:
            errors.append(f"need at least 1 time step, got N={self.N}")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def dy(self) -> float:
        return (self.y_b - self.y_a) / self.J

    @property
    def dtau(self) -> float:
        return self.T / self.N

    @cached_property
    def y(self) -> np.ndarray:
        return self.y_a + self.dy * np.arange(self.J + 1)

    @cached_property
    def tau(self) -> np.ndarray:
        return self.dtau * np.arange(self.N + 1)
