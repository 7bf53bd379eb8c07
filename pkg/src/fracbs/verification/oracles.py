"""Reference computations that share no code with the production path."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate

from fracbs.grid import Grid
from fracbs.problems import ProblemSpec


class QuadratureError(RuntimeError):
    pass


def _central_derivative(f: Callable[[float], float], h: float = 1e-3) -> Callable[[float], float]:
    # Fourth-order stencil; evaluates f slightly outside [0, t].
    def df(x: float) -> float:
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)

    return df


def caputo_oracle(
    f: Callable[[float], float],
    mu: float,
    t: float,
    df: Callable[[float], float] | None = None,
    tol: float = 1e-9,
) -> float:
    """Caputo derivative ``(1/Gamma(1-mu)) int_0^t f'(b) (t-b)^{-mu} db`` by quadrature.

    The substitution ``b = t - s^{1/(1-mu)}`` removes the endpoint
    singularity, leaving ``(1/Gamma(2-mu)) int_0^{t^{1-mu}} f'(t - s^{1/(1-mu)}) ds``.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"need 0 < mu < 1, got {mu}")
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    if df is None:
        df = _central_derivative(f)
    k = 1.0 / (1.0 - mu)
    upper = t ** (1.0 - mu)
    val, abserr, *rest = integrate.quad(
        lambda s: df(t - s**k), 0.0, upper, epsabs=tol * 1e-2, epsrel=1e-12, limit=200, full_output=1
    )
    if len(rest) > 1 or abserr > tol:
        raise QuadratureError(f"quadrature did not converge (estimate {abserr:.2e})")
    return val / math.gamma(2.0 - mu)


def dense_solve(matrix, rhs) -> np.ndarray:
    """Gaussian elimination with partial pivoting (LAPACK)."""
    return np.linalg.solve(np.asarray(matrix, dtype=float), np.asarray(rhs, dtype=float))


def _spline_constants_mp(p: float, dy: float) -> tuple[float, float, float]:
    import mpmath

    with mpmath.workdps(50):
        x = mpmath.mpf(p) * mpmath.mpf(dy)
        s, c = mpmath.sinh(x), mpmath.cosh(x)
        den = 2 * (x * c - s)
        g1 = (s - x) / den
        g2 = mpmath.mpf(p) * (1 - c) / den
        g3 = mpmath.mpf(p) ** 2 * s / den
        return float(g1), float(g2), float(g3)


def dense_reference_solve(
    spec: ProblemSpec, grid: Grid, mu: float, p: float, source_rule: str = "average"
) -> np.ndarray:
    """Straightforward (J+3)-unknown implementation of the full scheme.

    Ghost coefficients stay in the system with the boundary equations as
    extra rows; every step is solved by dense elimination and the memory sum
    is an explicit loop over stored coefficient vectors. Returns the
    (N+1) x (J+1) nodal surface.
    """
    J, N = grid.J, grid.N
    dt, dy = grid.T / N, (grid.y_b - grid.y_a) / J
    y = np.array([grid.y_a + j * dy for j in range(J + 1)])
    tau = np.array([n * dt for n in range(N + 1)])
    k1, k2, k3 = spec.kappas

    gm = math.gamma(2.0 - mu)
    varpi = 2.0 ** (mu - 1.0) / (dt**mu * gm)
    nu = [0.0] + [((i + 0.5) ** (1 - mu) - (i - 0.5) ** (1 - mu)) / (dt**mu * gm) for i in range(1, N + 1)]
    g1, g2, g3 = _spline_constants_mp(p, dy)

    size = J + 3  # unknowns d_{-1} .. d_{J+1}; column c holds d_{c-1}

    def value_row(j):
        row = np.zeros(size)
        row[j], row[j + 1], row[j + 2] = g1, 1.0, g1
        return row

    def slope_row(j):
        row = np.zeros(size)
        row[j], row[j + 2] = g2, -g2
        return row

    def curv_row(j):
        row = np.zeros(size)
        row[j], row[j + 1], row[j + 2] = g3, -2 * g3, g3
        return row

    V = np.array([value_row(j) for j in range(J + 1)])
    D1 = np.array([slope_row(j) for j in range(J + 1)])
    D2 = np.array([curv_row(j) for j in range(J + 1)])

    # initial interpolation with derivative end conditions
    u0 = np.asarray(spec.initial(y), dtype=float) * np.ones(J + 1)
    if spec.initial_derivative is not None:
        sa, sb = (float(v) for v in spec.initial_derivative(np.array([y[0], y[-1]])))
    else:
        sa = sb = float("nan")
    if not math.isfinite(sa):
        sa = (-3 * u0[0] + 4 * u0[1] - u0[2]) / (2 * dy)
    if not math.isfinite(sb):
        sb = (3 * u0[-1] - 4 * u0[-2] + u0[-3]) / (2 * dy)
    M0 = np.vstack([D1[0], V, D1[J]])
    delta = dense_solve(M0, np.concatenate([[sa], u0, [sb]]))

    A = np.vstack([V[0], -k1 * D2 - k2 * D1 + (2 * varpi + k3) * V, V[J]])
    B = k1 * D2 + k2 * D1 + (2 * varpi - k3) * V

    def g_half(n):
        if source_rule == "average":
            return 0.5 * (spec.source(y, tau[n]) + spec.source(y, tau[n + 1]))
        return spec.source(y, (n + 0.5) * dt)

    deltas = [delta]
    nodal = [V @ delta]
    for n in range(N):
        rhs = B @ deltas[n] + 2 * g_half(n) * np.ones(J + 1)
        if n >= 1:
            mem = nu[n] * (V @ deltas[0]) - nu[1] * (V @ deltas[n])
            for q in range(1, n):
                mem = mem - (nu[n - q + 1] - nu[n - q]) * (V @ deltas[q])
            rhs = rhs + 2 * mem
        h1 = float(spec.h1(np.array(tau[n + 1])))
        h2 = float(spec.h2(np.array(tau[n + 1])))
        new = dense_solve(A, np.concatenate([[h1], rhs, [h2]]))
        deltas.append(new)
        nodal.append(V @ new)
    return np.array(nodal)
