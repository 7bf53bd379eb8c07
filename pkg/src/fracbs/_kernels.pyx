# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Mirrors ``fracbs._kernels_py`` function for function; the two must agree to
round-off. All arrays are float64 and C-contiguous.
"""
import numpy as np

from scipy.linalg.cython_blas cimport dgemv


cpdef void thomas_solve(const double[::1] lower, const double[::1] piv,
                        const double[::1] sup, const double[::1] rhs,
                        double[::1] out) noexcept:
    """Forward/back substitution with a precomputed Thomas factorization."""
    cdef Py_ssize_t n = piv.shape[0]
    cdef Py_ssize_t i
    out[0] = rhs[0]
    for i in range(1, n):
        out[i] = rhs[i] - lower[i] * out[i - 1]
    out[n - 1] = out[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = (out[i] - sup[i] * out[i + 1]) / piv[i]


cdef void _history_blas(const double[::1] nu, const double[::1] dnu,
                        const double[:, ::1] nodal, Py_ssize_t n,
                        double[::1] out) noexcept:
    # dnu[k] = nu[k+1] - nu[k]; the coefficient of G^q is dnu[n-q-1], i.e.
    # dnu read backwards, hence incx = -1.
    cdef int m = <int>out.shape[0]
    cdef int k = <int>(n - 1)
    cdef int inc = 1, incx = -1
    cdef double alpha = -1.0, beta = 1.0
    cdef Py_ssize_t j
    cdef double a, b
    if n == 0:
        for j in range(m):
            out[j] = 0.0
        return
    a = nu[n - 1]
    b = nu[0]
    for j in range(m):
        out[j] = a * nodal[0, j] - b * nodal[n, j]
    if k > 0:
        dgemv(b"N", &m, &k, &alpha, <double*>&nodal[1, 0], &m,
              <double*>&dnu[0], &incx, &beta, &out[0], &inc)


def history_sum(const double[::1] nu, const double[:, ::1] nodal,
                Py_ssize_t n, double[::1] out):
    """out = nu_n G^0 - nu_1 G^n - sum_{q=1}^{n-1} (nu_{n-q+1} - nu_{n-q}) G^q.

    ``nu[i - 1]`` holds nu_i. For n == 0 the result is zero.
    """
    cdef double[::1] dnu = np.diff(nu) if nu.shape[0] > 1 else np.zeros(1)
    _history_blas(nu, dnu, nodal, n, out)


def march(double[::1] stencil, double gamma1,
          const double[::1] lower, const double[::1] piv, const double[::1] sup,
          const double[::1] nu, const double[:, ::1] source,
          const double[::1] h1, const double[::1] h2,
          double[::1] delta, double[:, ::1] nodal):
    """Advance the collocation scheme over all steps.

    ``stencil`` is (im1, ..., im6). ``delta`` holds the J+3 spline
    coefficients (ghosts included) of step 0 on entry and of the last step on
    exit. ``nodal`` must have row 0 filled; rows 1..N are written.
    """
    cdef Py_ssize_t n_steps = source.shape[0]
    cdef Py_ssize_t m = piv.shape[0]
    cdef Py_ssize_t jm = m - 1
    cdef Py_ssize_t n, j
    cdef double im1 = stencil[0], im3 = stencil[2]
    cdef double im4 = stencil[3], im5 = stencil[4], im6 = stencil[5]
    cdef double[::1] phi = np.empty(m)
    cdef double[::1] hist = np.empty(m)
    cdef double[::1] x = np.empty(m)
    cdef double[::1] dnu = np.diff(nu) if nu.shape[0] > 1 else np.zeros(1)

    for n in range(n_steps):
        _history_blas(nu, dnu, nodal, n, hist)
        for j in range(m):
            phi[j] = (im4 * delta[j] + im5 * delta[j + 1] + im6 * delta[j + 2]
                      + 2.0 * hist[j] + 2.0 * source[n, j])
        phi[0] -= im1 * h1[n + 1] / gamma1
        phi[jm] -= im3 * h2[n + 1] / gamma1
        thomas_solve(lower, piv, sup, phi, x)
        for j in range(m):
            delta[j + 1] = x[j]
        delta[0] = (h1[n + 1] - x[0] - gamma1 * x[1]) / gamma1
        delta[m + 1] = (h2[n + 1] - x[jm] - gamma1 * x[jm - 1]) / gamma1
        for j in range(m):
            nodal[n + 1, j] = gamma1 * delta[j] + delta[j + 1] + gamma1 * delta[j + 2]
