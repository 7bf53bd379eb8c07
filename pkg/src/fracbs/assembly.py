"""Collocation system for one Crank-Nicolson step.

At each node ``y_j`` the scheme reads

    im1 d_{j-1}^{n+1} + im2 d_j^{n+1} + im3 d_{j+1}^{n+1} = phi_j^n,

with ``d`` the J+3 spline coefficients (ghosts ``d_{-1}``, ``d_{J+1}``
included). The ghosts are eliminated through the boundary rows
``gamma1 d_{-1} + d_0 + gamma1 d_1 = h1`` (and the mirror at ``y_J``), which
leaves a (J+1) x (J+1) tridiagonal system.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fracbs import tridiag
from fracbs.basis import SplineBasis, coefficient_nodal_values
from fracbs.fractional import FractionalWeights, history_term


@dataclass(frozen=True)
class CoefficientStencil:
    im1: float
    im2: float
    im3: float
    im4: float
    im5: float
    im6: float
    kappa1: float
    kappa2: float
    kappa3: float
    gamma1: float

    @property
    def lhs(self) -> tuple[float, float, float]:
        return self.im1, self.im2, self.im3

    @property
    def rhs(self) -> tuple[float, float, float]:
        return self.im4, self.im5, self.im6

    def as_array(self) -> np.ndarray:
        return np.array([self.im1, self.im2, self.im3, self.im4, self.im5, self.im6])


@dataclass(frozen=True)
class TridiagonalSystem:
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def dense(self) -> np.ndarray:
        return tridiag.to_dense(self.sub, self.diag, self.sup)


def build_stencil(basis: SplineBasis, w: FractionalWeights, kappas) -> CoefficientStencil:
    k1, k2, k3 = (float(k) for k in kappas)
    errors = []
    if not k1 > 0:
        errors.append(f"kappa1 must be positive, got {k1}")
    if not k3 > 0:
        errors.append(f"kappa3 must be positive, got {k3}")
    if errors:
        raise ValueError("; ".join(errors))
    g1, g2, g3 = basis.gamma1, basis.gamma2, basis.gamma3
    plus = 2.0 * w.varpi + k3
    minus = 2.0 * w.varpi - k3
    return CoefficientStencil(
        im1=g1 * plus - g2 * k2 - g3 * k1,
        im2=plus + 2.0 * g3 * k1,
        im3=g1 * plus + g2 * k2 - g3 * k1,
        im4=g1 * minus + g2 * k2 + g3 * k1,
        im5=minus - 2.0 * g3 * k1,
        im6=g1 * minus - g2 * k2 + g3 * k1,
        kappa1=k1,
        kappa2=k2,
        kappa3=k3,
        gamma1=g1,
    )


def build_rhs(
    stencil: CoefficientStencil,
    w: FractionalWeights,
    delta: np.ndarray,
    nodal_history,
    g_half: np.ndarray,
    n: int,
) -> np.ndarray:
    """Right-hand side ``phi^n`` at the J+1 nodes.

    ``delta`` are the coefficients of step ``n`` (length J+3) and
    ``nodal_history`` the nodal values ``G^0..G^n`` (at least n+1 rows).
    """
    delta = np.asarray(delta, dtype=float)
    g_half = np.asarray(g_half, dtype=float)
    m = len(delta) - 2
    if g_half.shape != (m,):
        raise ValueError(f"source has shape {g_half.shape}, expected ({m},)")
    if len(nodal_history) < n + 1:
        raise ValueError(f"history has {len(nodal_history)} levels, step {n} needs {n + 1}")
    phi = stencil.im4 * delta[:-2] + stencil.im5 * delta[1:-1] + stencil.im6 * delta[2:]
    return phi + history_term(w, nodal_history, n) + 2.0 * g_half


def reduced_bands(stencil: CoefficientStencil, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left-hand bands of the (size x size) system after ghost elimination."""
    g1 = stencil.gamma1
    if g1 == 0.0:
        raise ValueError("gamma1 = 0: boundary rows cannot eliminate the ghost coefficients")
    sub = np.full(size, stencil.im1)
    diag = np.full(size, stencil.im2)
    sup = np.full(size, stencil.im3)
    sub[0] = 0.0
    sup[-1] = 0.0
    diag[0] = stencil.im2 - stencil.im1 / g1
    sup[0] = stencil.im3 - stencil.im1
    diag[-1] = stencil.im2 - stencil.im3 / g1
    sub[-1] = stencil.im1 - stencil.im3
    return sub, diag, sup


def reduce_boundaries(stencil: CoefficientStencil, phi, h1: float, h2: float) -> TridiagonalSystem:
    """Substitute ``d_{-1} = (h1 - d_0 - gamma1 d_1) / gamma1`` (and the mirror) into rows 0 and J."""
    rhs = np.array(phi, dtype=float)
    sub, diag, sup = reduced_bands(stencil, len(rhs))
    rhs[0] -= stencil.im1 * h1 / stencil.gamma1
    rhs[-1] -= stencil.im3 * h2 / stencil.gamma1
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rhs)


def recover_ghosts(gamma1: float, interior: np.ndarray, h1: float, h2: float) -> np.ndarray:
    """Full J+3 coefficient vector from the J+1 solved ones and the boundary data."""
    x = np.asarray(interior, dtype=float)
    delta = np.empty(len(x) + 2)
    delta[1:-1] = x
    delta[0] = (h1 - x[0] - gamma1 * x[1]) / gamma1
    delta[-1] = (h2 - x[-1] - gamma1 * x[-2]) / gamma1
    return delta


def one_sided_slopes(values: np.ndarray, dy: float) -> tuple[float, float]:
    """Second-order one-sided first differences at both ends."""
    u = np.asarray(values, dtype=float)
    left = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy)
    right = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * dy)
    return float(left), float(right)


def initial_coefficients(basis: SplineBasis, u0, slope_a=None, slope_b=None) -> np.ndarray:
    """Spline coefficients interpolating ``u0`` at the nodes.

    The two extra degrees of freedom are closed with first-derivative end
    conditions ``gamma2 (d_{-1} - d_1) = u0'(y_a)`` and
    ``gamma2 (d_{J-1} - d_{J+1}) = u0'(y_b)``. Missing or non-finite slopes
    are replaced by one-sided differences of the nodal data.
    """
    u0 = np.asarray(u0, dtype=float)
    if u0.ndim != 1 or len(u0) < 3:
        raise ValueError("need at least 3 nodal values")
    fd_a, fd_b = one_sided_slopes(u0, basis.dy)
    sa = fd_a if slope_a is None or not np.isfinite(slope_a) else float(slope_a)
    sb = fd_b if slope_b is None or not np.isfinite(slope_b) else float(slope_b)
    g1, g2 = basis.gamma1, basis.gamma2

    m = len(u0)
    sub = np.full(m, g1)
    diag = np.ones(m)
    sup = np.full(m, g1)
    rhs = u0.copy()
    # d_{-1} = d_1 + sa / g2 and d_{J+1} = d_{J-1} - sb / g2
    sup[0] = 2.0 * g1
    rhs[0] -= g1 * sa / g2
    sub[-1] = 2.0 * g1
    rhs[-1] += g1 * sb / g2
    x = tridiag.solve(tridiag.factorize(sub, diag, sup), rhs)

    delta = np.empty(m + 2)
    delta[1:-1] = x
    delta[0] = x[1] + sa / g2
    delta[-1] = x[-2] - sb / g2
    return delta


__all__ = [
    "CoefficientStencil",
    "TridiagonalSystem",
    "build_stencil",
    "build_rhs",
    "reduce_boundaries",
    "reduced_bands",
    "recover_ghosts",
    "initial_coefficients",
    "one_sided_slopes",
    "coefficient_nodal_values",
]
