"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and in-place conventions, so ``_backend`` can swap them.
"""
from __future__ import annotations

import numpy as np


def thomas_solve(lower, piv, sup, rhs, out) -> None:
    n = len(piv)
    out[0] = rhs[0]
    for i in range(1, n):
        out[i] = rhs[i] - lower[i] * out[i - 1]
    out[n - 1] = out[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = (out[i] - sup[i] * out[i + 1]) / piv[i]


def history_sum(nu, nodal, n, out) -> None:
    if n == 0:
        out[:] = 0.0
        return
    out[:] = nu[n - 1] * nodal[0] - nu[0] * nodal[n]
    if n >= 2:
        q = np.arange(1, n)
        coef = nu[n - q] - nu[n - q - 1]
        out -= coef @ nodal[1:n]


def march(stencil, gamma1, lower, piv, sup, nu, source, h1, h2, delta, nodal) -> None:
    im1, _, im3, im4, im5, im6 = stencil
    m = len(piv)
    hist = np.empty(m)
    x = np.empty(m)
    for n in range(source.shape[0]):
        history_sum(nu, nodal, n, hist)
        phi = im4 * delta[:-2] + im5 * delta[1:-1] + im6 * delta[2:] + 2.0 * hist + 2.0 * source[n]
        phi[0] -= im1 * h1[n + 1] / gamma1
        phi[-1] -= im3 * h2[n + 1] / gamma1
        thomas_solve(lower, piv, sup, phi, x)
        delta[1:-1] = x
        delta[0] = (h1[n + 1] - x[0] - gamma1 * x[1]) / gamma1
        delta[-1] = (h2[n + 1] - x[-1] - gamma1 * x[-2]) / gamma1
        nodal[n + 1] = gamma1 * delta[:-2] + delta[1:-1] + gamma1 * delta[2:]
