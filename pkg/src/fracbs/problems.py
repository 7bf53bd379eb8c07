"""Problem definitions in the log-price / time-to-expiry variables.

Every problem has the form

    D^mu u = k1 u_yy + k2 u_y - k3 u + g(y, tau),   y_a < y < y_b,
    u(y_a, tau) = h1(tau),  u(y_b, tau) = h2(tau),  u(y, 0) = u0(y),

where ``D^mu`` is the Caputo derivative in ``tau``. Callables are evaluated
on numpy arrays and must broadcast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

Fn1 = Callable[[np.ndarray], np.ndarray]
Fn2 = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ProblemSpec:
    kappas: tuple[float, float, float]
    domain: tuple[float, float]
    horizon: float
    source: Fn2
    initial: Fn1
    h1: Fn1
    h2: Fn1
    initial_derivative: Fn1 | None = None
    exact: Fn2 | None = None
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        k1, _, k3 = self.kappas
        errors = []
        if not k1 > 0:
            errors.append(f"diffusion coefficient kappa1 must be positive, got {k1}")
        if not k3 > 0:
            errors.append(f"reaction coefficient kappa3 must be positive, got {k3}")
        if not self.domain[0] < self.domain[1]:
            errors.append(f"domain must satisfy y_a < y_b, got {self.domain}")
        if not self.horizon > 0:
            errors.append(f"horizon must be positive, got {self.horizon}")
        if errors:
            raise ValueError("; ".join(errors))

    def check_compatibility(self, n_samples: int = 11, atol: float = 1e-12) -> None:
        """Assert the exact solution (if any) matches u0, h1 and h2 on sample points."""
        if self.exact is None:
            return
        ya, yb = self.domain
        y = np.linspace(ya, yb, n_samples)
        tau = np.linspace(0.0, self.horizon, n_samples)
        zero = np.zeros_like(y)
        checks = {
            "initial": (self.exact(y, zero), self.initial(y)),
            "h1": (self.exact(np.full_like(tau, ya), tau), self.h1(tau)),
            "h2": (self.exact(np.full_like(tau, yb), tau), self.h2(tau)),
        }
        for what, (a, b) in checks.items():
            if not np.allclose(a, b, rtol=0.0, atol=atol):
                raise ValueError(f"exact solution incompatible with {what} data")


def kappas_from_market(r: float, sigma: float, div: float = 0.0) -> tuple[float, float, float]:
    k1 = 0.5 * sigma * sigma
    return k1, r - div - k1, r


MANUFACTURED_MARKET = dict(r=0.05, sigma=0.25, div=0.0)


def manufactured_problem(mu: float) -> ProblemSpec:
    """Smooth test problem with exact solution ``(tau+1)^2 y^2 (1-y)`` on [0, 1], T = 1."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"fractional order must satisfy 0 < mu < 1, got {mu}")
    k1, k2, k3 = kappas_from_market(**MANUFACTURED_MARKET)
    g2 = math.gamma(2.0 - mu)
    g3 = math.gamma(3.0 - mu)

    def exact(y, tau):
        return (tau + 1.0) ** 2 * y * y * (1.0 - y)

    def source(y, tau):
        shape = y * y * (1.0 - y)
        caputo_time = 2.0 * tau ** (2.0 - mu) / g3 + 2.0 * tau ** (1.0 - mu) / g2
        spatial = k1 * (2.0 - 6.0 * y) + k2 * (2.0 * y - 3.0 * y * y) - k3 * shape
        return caputo_time * shape - (tau + 1.0) ** 2 * spatial

    return ProblemSpec(
        kappas=(k1, k2, k3),
        domain=(0.0, 1.0),
        horizon=1.0,
        source=source,
        initial=lambda y: y * y * (1.0 - y),
        initial_derivative=lambda y: 2.0 * y - 3.0 * y * y,
        h1=np.zeros_like,
        h2=np.zeros_like,
        exact=exact,
        name="manufactured",
        params=dict(mu=mu, **MANUFACTURED_MARKET),
    )


def constant_problem(value: float, kappas=None, domain=(0.0, 1.0), horizon=1.0) -> ProblemSpec:
    """Steady state ``u = value``: the source balances the reaction term."""
    kappas = kappas or kappas_from_market(**MANUFACTURED_MARKET)
    c = float(value)
    return ProblemSpec(
        kappas=tuple(kappas),
        domain=tuple(domain),
        horizon=horizon,
        source=lambda y, tau: np.full(np.broadcast(y, tau).shape, kappas[2] * c),
        initial=lambda y: np.full_like(y, c, dtype=float),
        initial_derivative=lambda y: np.zeros_like(y, dtype=float),
        h1=lambda tau: np.full_like(tau, c, dtype=float),
        h2=lambda tau: np.full_like(tau, c, dtype=float),
        exact=lambda y, tau: np.full(np.broadcast(y, tau).shape, c),
        name="constant" if c else "zero",
        params=dict(value=c),
    )


def zero_problem(**kw) -> ProblemSpec:
    return constant_problem(0.0, **kw)


@dataclass(frozen=True)
class MarketParams:
    r: float
    sigma: float
    div: float = 0.0
    expiry: float = 1.0
    strike: float = 100.0
    zeta_range: tuple[float, float] | None = None
    """Truncation bounds in price units; default ``K exp(+-4 sigma sqrt(T))``."""

    def __post_init__(self):
        errors = []
        if not self.sigma > 0:
            errors.append(f"volatility sigma must be positive, got {self.sigma}")
        if not self.r > 0:
            errors.append(f"interest rate r must be positive, got {self.r}")
        if not self.expiry > 0:
            errors.append(f"expiry T must be positive, got {self.expiry}")
        if not self.strike > 0:
            errors.append(f"strike K must be positive, got {self.strike}")
        if not self.div >= 0:
            errors.append(f"dividend rate must be nonnegative, got {self.div}")
        if self.zeta_range is not None:
            lo, hi = self.zeta_range
            if not 0 < lo < self.strike < hi:
                errors.append(
                    f"truncation bounds must satisfy 0 < zeta_min < K < zeta_max, got {self.zeta_range}"
                )
        if errors:
            raise ValueError("; ".join(errors))

    def log_bounds(self) -> tuple[float, float]:
        if self.zeta_range is not None:
            return math.log(self.zeta_range[0]), math.log(self.zeta_range[1])
        half = 4.0 * self.sigma * math.sqrt(self.expiry)
        lnk = math.log(self.strike)
        return lnk - half, lnk + half


def black_scholes_problem(m: MarketParams, kind: Literal["call", "put"] = "call") -> ProblemSpec:
    """European option in ``y = ln(zeta)``, ``tau = T - t``.

    Far-field data are the classical asymptotics: a call is worthless at
    ``y_a`` and worth ``zeta e^{-D tau} - K e^{-r tau}`` at ``y_b``; the put
    mirrors this.
    """
    if kind not in ("call", "put"):
        raise ValueError(f"option kind must be 'call' or 'put', got {kind!r}")
    ya, yb = m.log_bounds()
    K, r, D = m.strike, m.r, m.div
    lnk = math.log(K)
    sign = 1.0 if kind == "call" else -1.0

    def payoff(y):
        # K expm1(y - ln K) is exactly zero at the strike and keeps digits near it
        return np.maximum(sign * K * np.expm1(np.asarray(y, dtype=float) - lnk), 0.0)

    def payoff_slope(y):
        y = np.asarray(y, dtype=float)
        slope = np.where(sign * (y - lnk) > 0, sign * np.exp(y), 0.0)
        # no derivative at the kink: the caller falls back to differences
        return np.where(y == lnk, np.nan, slope)

    def forward_gap(zeta, tau):
        return zeta * np.exp(-D * tau) - K * np.exp(-r * tau)

    if kind == "call":
        h1 = np.zeros_like
        h2 = lambda tau: forward_gap(math.exp(yb), tau)  # noqa: E731
    else:
        h1 = lambda tau: -forward_gap(math.exp(ya), tau)  # noqa: E731
        h2 = np.zeros_like

    return ProblemSpec(
        kappas=kappas_from_market(r, m.sigma, D),
        domain=(ya, yb),
        horizon=m.expiry,
        source=lambda y, tau: np.zeros(np.broadcast(y, tau).shape),
        initial=payoff,
        initial_derivative=payoff_slope,
        h1=h1,
        h2=h2,
        name=f"black-scholes-{kind}",
        params=dict(r=r, sigma=m.sigma, div=D, expiry=m.expiry, strike=K, kind=kind),
    )


@dataclass(frozen=True)
class PriceSurface:
    """Option prices ``W(zeta_j, t_n)`` with ``t = T - tau``."""

    zeta: np.ndarray
    t: np.ndarray
    W: np.ndarray
    """Shape (len(t), len(zeta)); row n corresponds to ``t[n]``."""

    def triples(self):
        for n, tn in enumerate(self.t):
            for j, z in enumerate(self.zeta):
                yield float(z), float(tn), float(self.W[n, j])


def to_financial(nodal: np.ndarray, grid, m: MarketParams | float) -> PriceSurface:
    """Map ``u(y_j, tau_n)`` to ``W(e^{y_j}, T - tau_n)``; coordinates only."""
    expiry = m.expiry if isinstance(m, MarketParams) else float(m)
    nodal = np.asarray(nodal, dtype=float)
    if nodal.shape != (len(grid.tau), len(grid.y)):
        raise ValueError(f"nodal surface shape {nodal.shape} does not match the grid")
    return PriceSurface(zeta=np.exp(grid.y), t=expiry - grid.tau, W=nodal.copy())


def from_financial(surface: PriceSurface, expiry: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`to_financial`: returns ``(y, tau, u)``."""
    return np.log(surface.zeta), expiry - surface.t, surface.W.copy()
