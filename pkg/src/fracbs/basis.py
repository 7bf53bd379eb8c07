"""Nodal constants of the exponential B-spline basis.

Each basis function is centred on a node, spans four cells and is normalised
to 1 at its centre. Only its nodal values enter the collocation scheme:

    node           y_{j-1}   y_j     y_{j+1}
    B_j            gamma1    1       gamma1
    B_j''          gamma3    -2g3    gamma3

with ``x = p * dy``, ``s = sinh(x)``, ``c = cosh(x)`` and

    gamma1 = (s - x) / (2 (x c - s))
    gamma2 = p (1 - c) / (2 (x c - s))
    gamma3 = p^2 s / (2 (x c - s))

For the first derivative the nodal identity used is
``U'(y_j) = gamma2 (d_{j-1} - d_{j+1})``; with ``gamma2 < 0`` this is the
central difference orientation.

As ``x -> 0`` the constants tend to the cubic B-spline values
(1/4, -3/(4 dy), 3/(2 dy^2)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SERIES_SWITCH = 0.1
"""Below this ``p * dy`` the constants come from truncated Taylor series."""


@dataclass(frozen=True)
class SplineBasis:
    p: float
    dy: float
    gamma1: float
    gamma2: float
    gamma3: float


def _series(x: float, dy: float) -> tuple[float, float, float]:
    # Numerators and denominator divided by x^3; truncation error ~x^8.
    x2 = x * x
    den = 2.0 * (1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 / 45360.0)))
    n1 = 1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 / 362880.0))
    n2 = 0.5 + x2 * (1.0 / 24.0 + x2 * (1.0 / 720.0 + x2 / 40320.0))
    n3 = 1.0 + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 / 5040.0))
    return n1 / den, -n2 / (den * dy), n3 / (den * dy * dy)


def _closed(p: float, x: float) -> tuple[float, float, float]:
    # Divided through by cosh(x) so large x cannot overflow.
    t = math.tanh(x)
    sech = 1.0 / math.cosh(x) if x < 700.0 else 0.0
    den = 2.0 * (x - t)
    return (t - x * sech) / den, p * (sech - 1.0) / den, p * p * t / den


def _literal(p: float, x: float) -> tuple[float, float, float]:
    s, c = math.sinh(x), math.cosh(x)
    den = 2.0 * (x * c - s)
    return (s - x) / den, p * (1.0 - c) / den, p * p * s / den


EVALUATIONS = ("stable", "literal")


def basis_constants(p: float, dy: float, evaluation: str = "stable") -> SplineBasis:
    """Nodal constants for tension ``p`` and spacing ``dy``.

    ``evaluation="stable"`` switches to series below ``SERIES_SWITCH`` and
    is accurate to ~1e-13 relative everywhere. ``"literal"`` evaluates the
    sinh/cosh quotients as written; for small ``p * dy`` its relative error
    grows like ``1e-15 / (p dy)^2``. It exists to reproduce published numbers
    computed that way.
    """
    if evaluation not in EVALUATIONS:
        raise ValueError(f"unknown evaluation {evaluation!r}; expected one of {EVALUATIONS}")
    if not p > 0.0 or not math.isfinite(p):
        raise ValueError(f"tension parameter p must be positive, got {p}")
    if not dy > 0.0 or not math.isfinite(dy):
        raise ValueError(f"space step must be positive, got {dy}")
    x = p * dy
    if evaluation == "literal":
        g1, g2, g3 = _literal(p, x)
    elif x < SERIES_SWITCH:
        g1, g2, g3 = _series(x, dy)
    else:
        g1, g2, g3 = _closed(p, x)
    return SplineBasis(p=float(p), dy=float(dy), gamma1=g1, gamma2=g2, gamma3=g3)


def nodal_values(basis: SplineBasis, triple):
    """Value, first and second derivative at ``y_j`` from ``(d_{j-1}, d_j, d_{j+1})``.

    Entries of ``triple`` may be scalars or equally shaped arrays.
    """
    dm, d0, dp = (np.asarray(t, dtype=float) for t in triple)
    value = basis.gamma1 * dm + d0 + basis.gamma1 * dp
    first = basis.gamma2 * dm - basis.gamma2 * dp
    second = basis.gamma3 * (dm - 2.0 * d0 + dp)
    if value.ndim == 0:
        return float(value), float(first), float(second)
    return value, first, second


def coefficient_nodal_values(basis: SplineBasis, delta: np.ndarray) -> np.ndarray:
    """Spline values at all J+1 nodes from the J+3 coefficients (ghosts included)."""
    delta = np.asarray(delta, dtype=float)
    return basis.gamma1 * delta[:-2] + delta[1:-1] + basis.gamma1 * delta[2:]
