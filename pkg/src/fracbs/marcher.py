"""Time stepping for the collocation scheme."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from fracbs import _backend, tridiag
from fracbs.assembly import build_stencil, initial_coefficients, reduced_bands
from fracbs.basis import basis_constants, coefficient_nodal_values
from fracbs.fractional import make_weights
from fracbs.grid import Grid
from fracbs.problems import ProblemSpec

SourceRule = Literal["average", "midpoint"]
SOURCE_RULES = ("average", "midpoint")


class StepError(RuntimeError):
    """A failure inside the time loop, tagged with the step index."""

    def __init__(self, step: int, cause: Exception):
        super().__init__(f"step {step}: {cause}")
        self.step = step


@dataclass(frozen=True)
class SolveResult:
    nodal: np.ndarray
    """(N+1) x (J+1) nodal values ``U(y_j, tau_n)``."""
    final_delta: np.ndarray
    grid: Grid
    meta: dict = field(default_factory=dict)


def half_step_source(spec: ProblemSpec, grid: Grid, rule: SourceRule = "average") -> np.ndarray:
    """Source at every half step, shape (N, J+1).

    ``average`` uses ``(g(tau_n) + g(tau_{n+1})) / 2``; ``midpoint`` uses
    ``g(tau_{n+1/2})``.
    """
    y = grid.y[None, :]
    if rule == "average":
        g = np.broadcast_to(spec.source(y, grid.tau[:, None]), (grid.N + 1, grid.J + 1))
        return 0.5 * (g[:-1] + g[1:])
    if rule == "midpoint":
        mid = (np.arange(grid.N) + 0.5) * grid.dtau
        return np.broadcast_to(spec.source(y, mid[:, None]), (grid.N, grid.J + 1)).astype(float)
    raise ValueError(f"unknown source rule {rule!r}; expected one of {SOURCE_RULES}")


def _check_domain(spec: ProblemSpec, grid: Grid) -> None:
    ya, yb = spec.domain
    if not (np.isclose(grid.y_a, ya) and np.isclose(grid.y_b, yb) and np.isclose(grid.T, spec.horizon)):
        raise ValueError(
            f"grid [{grid.y_a}, {grid.y_b}] x [0, {grid.T}] does not match problem "
            f"domain {spec.domain} x [0, {spec.horizon}]"
        )


def run(
    spec: ProblemSpec,
    grid: Grid,
    mu: float,
    p: float,
    *,
    source_rule: SourceRule = "average",
    constants: str = "stable",
    backend: str | None = None,
) -> SolveResult:
    """Solve ``spec`` on ``grid`` with fractional order ``mu`` and tension ``p``.

    ``source_rule`` picks how the source enters each half step (see
    :func:`half_step_source`); ``constants`` is passed to
    :func:`~fracbs.basis.basis_constants`.
    """
    _check_domain(spec, grid)
    t0 = time.perf_counter()
    kern = _backend.get(backend)

    w = make_weights(mu, grid.dtau, grid.N)
    basis = basis_constants(p, grid.dy, constants)
    stencil = build_stencil(basis, w, spec.kappas)
    fact = tridiag.factorize(*reduced_bands(stencil, grid.J + 1))

    y = grid.y
    u0 = np.broadcast_to(spec.initial(y), y.shape).astype(float)
    slope_a = slope_b = None
    if spec.initial_derivative is not None:
        slope_a, slope_b = (float(s) for s in spec.initial_derivative(np.array([y[0], y[-1]])))
    delta = initial_coefficients(basis, u0, slope_a, slope_b)

    source = np.ascontiguousarray(half_step_source(spec, grid, source_rule))
    h1 = np.ascontiguousarray(np.broadcast_to(spec.h1(grid.tau), grid.tau.shape), dtype=float)
    h2 = np.ascontiguousarray(np.broadcast_to(spec.h2(grid.tau), grid.tau.shape), dtype=float)

    nodal = np.empty((grid.N + 1, grid.J + 1))
    nodal[0] = coefficient_nodal_values(basis, delta)
    kern.march(
        stencil.as_array(), basis.gamma1, fact.lower, fact.pivots, fact.sup,
        np.ascontiguousarray(w.nu), source, h1, h2, delta, nodal,
    )
    if not np.all(np.isfinite(nodal)):
        bad = int(np.argmax(~np.all(np.isfinite(nodal), axis=1)))
        raise StepError(bad - 1, ArithmeticError("non-finite values in the solution"))

    meta = dict(
        problem=spec.name, mu=mu, p=p, J=grid.J, N=grid.N,
        domain=(grid.y_a, grid.y_b), horizon=grid.T, source_rule=source_rule, constants=constants,
        backend=_backend.name_of(kern),
        wall_time=time.perf_counter() - t0,
    )
    return SolveResult(nodal=nodal, final_delta=delta, grid=grid, meta=meta)


def nodal_row(result: SolveResult, n: int) -> np.ndarray:
    N = result.nodal.shape[0] - 1
    if not 0 <= n <= N:
        raise IndexError(f"time level {n} outside 0..{N}")
    return result.nodal[n].copy()


def solve_problem(spec: ProblemSpec, mu: float, p: float, J: int, N: int, **kw) -> SolveResult:
    """Convenience wrapper building the grid from the problem's domain."""
    grid = Grid(spec.domain[0], spec.domain[1], J, spec.horizon, N)
    return run(spec, grid, mu, p, **kw)
