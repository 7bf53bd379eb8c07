from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

L2_CONVENTIONS = ("weighted", "unweighted")

L2_CONVENTION = "weighted"
"""Reporting default ``sqrt(dy * sum e^2)``; chosen by :func:`fracbs.verification.tables.calibrate_l2_convention`."""


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    mu: float
    p: float
    J: int
    N: int
    rate_l2: float | None = None
    rate_linf: float | None = None

    def __post_init__(self):
        if self.l2 < 0 or self.linf < 0:
            raise ValueError("error norms must be nonnegative")

    def with_rates(self, previous: "ErrorReport | None") -> "ErrorReport":
        if previous is None:
            return replace(self, rate_l2=None, rate_linf=None)
        return replace(
            self,
            rate_l2=pair_rate(previous.l2, self.l2),
            rate_linf=pair_rate(previous.linf, self.linf),
        )

    def norm(self, name: str) -> float:
        return {"l2": self.l2, "linf": self.linf}[name]

    def rate(self, name: str) -> float | None:
        return {"l2": self.rate_l2, "linf": self.rate_linf}[name]


def error_norms(numeric, exact, dy: float, convention: str = L2_CONVENTION) -> tuple[float, float]:
    """Discrete ``(l2, linf)`` of the nodal error ``numeric - exact``."""
    a = np.asarray(numeric, dtype=float)
    b = np.asarray(exact, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if convention not in L2_CONVENTIONS:
        raise ValueError(f"unknown L2 convention {convention!r}")
    e = a - b
    ss = float(np.sum(e * e))
    l2 = math.sqrt(dy * ss) if convention == "weighted" else math.sqrt(ss)
    linf = float(np.max(np.abs(e))) if e.size else 0.0
    return l2, linf


def pair_rate(coarse: float, fine: float, factor: float = 2.0) -> float | None:
    if not (coarse > 0 and fine > 0):
        return None
    return math.log(coarse / fine) / math.log(factor)


def convergence_rates(errors: Sequence[float], factor: float = 2.0) -> list[float | None]:
    """Observed orders between successive refinements; ``None`` where undefined."""
    if len(errors) < 2:
        raise ValueError("need at least two errors to estimate a rate")
    return [pair_rate(errors[k - 1], errors[k], factor) for k in range(1, len(errors))]
