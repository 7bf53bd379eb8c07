"""Crank-Nicolson weights for the Caputo derivative at half time nodes.

For a uniform step ``dtau`` the derivative at ``tau_{n+1/2}`` is approximated
by

    varpi (u^{n+1} - u^n) + nu_1 u^n - nu_n u^0
        + sum_{q=1}^{n-1} (nu_{n-q+1} - nu_{n-q}) u^q

with ``varpi = 2^{mu-1} dtau^{-mu} / Gamma(2-mu)`` and
``nu_i = ((i+1/2)^{1-mu} - (i-1/2)^{1-mu}) / (dtau^mu Gamma(2-mu))``.
The truncation error is O(dtau^{2-mu}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fracbs import _backend


@dataclass(frozen=True)
class FractionalWeights:
    """Immutable weight table for one (mu, dtau, n_steps) configuration."""

    mu: float
    dtau: float
    varpi: float
    nu: np.ndarray
    """``nu[i - 1]`` is nu_i for 1 <= i <= n_steps."""

    @property
    def n_steps(self) -> int:
        return len(self.nu)


def make_weights(mu: float, dtau: float, n_steps: int) -> FractionalWeights:
    if not 0.0 < mu < 1.0:
        raise ValueError(f"fractional order must satisfy 0 < mu < 1, got {mu}")
    if not dtau > 0.0 or not math.isfinite(dtau):
        raise ValueError(f"time step must be positive, got {dtau}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")

    g2 = math.gamma(2.0 - mu)
    varpi = 2.0 ** (mu - 1.0) * dtau ** (-mu) / g2
    i = np.arange(1, n_steps + 1, dtype=float)
    nu = ((i + 0.5) ** (1.0 - mu) - (i - 0.5) ** (1.0 - mu)) / (dtau**mu * g2)
    nu.flags.writeable = False
    return FractionalWeights(mu=float(mu), dtau=float(dtau), varpi=varpi, nu=nu)


def _as_history(nodal_history: Sequence[np.ndarray] | np.ndarray, n: int) -> np.ndarray:
    if isinstance(nodal_history, np.ndarray) and nodal_history.ndim == 2:
        hist = nodal_history
    else:
        rows = [np.asarray(r, dtype=float) for r in nodal_history]
        if len({r.shape for r in rows}) > 1:
            raise ValueError("history arrays must all have the same length")
        hist = np.stack(rows) if rows else np.empty((0, 0))
    if not 0 <= n < hist.shape[0]:
        raise ValueError(f"step index n={n} outside the supplied history of {hist.shape[0]} levels")
    return np.ascontiguousarray(hist, dtype=float)


def history_term(
    w: FractionalWeights,
    nodal_history: Sequence[np.ndarray] | np.ndarray,
    n: int,
) -> np.ndarray:
    """Memory contribution to the right-hand side of step ``n -> n+1``.

    Returns ``2 (nu_n U^0 - nu_1 U^n + sum_{q=1}^{n-1} (nu_{n-q} - nu_{n-q+1}) U^q)``
    evaluated pointwise. At ``n == 0`` every nu-term is absent and the
    result is zero.
    """
    hist = _as_history(nodal_history, n)
    if n > w.n_steps:
        raise ValueError(f"step index n={n} exceeds the weight table ({w.n_steps} steps)")
    out = np.empty(hist.shape[1])
    _backend.kernels.history_sum(np.ascontiguousarray(w.nu), hist, n, out)
    return 2.0 * out


def discrete_caputo(w: FractionalWeights, values: Sequence[float] | np.ndarray, n: int) -> np.ndarray | float:
    """Discrete Caputo derivative at ``tau_{n+1/2}`` from levels ``u^0..u^{n+1}``.

    ``values`` may be scalars per level or arrays per level (leading axis is
    time).
    """
    u = np.asarray(values, dtype=float)
    if u.shape[0] < n + 2:
        raise ValueError(f"need {n + 2} time levels, got {u.shape[0]}")
    rest = u.reshape(u.shape[0], -1)
    # history_term carries the factor 2 and the opposite sign
    mem = -0.5 * history_term(w, rest[: n + 1], n)
    out = w.varpi * (rest[n + 1] - rest[n]) + mem
    return float(out[0]) if u.ndim == 1 else out.reshape(u.shape[1:])
