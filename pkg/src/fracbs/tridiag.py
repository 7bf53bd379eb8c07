"""Thomas algorithm with a reusable factorization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fracbs import _backend

PIVOT_RTOL = 1e-14


class SingularSystemError(ArithmeticError):
    """Raised when forward elimination meets a (near-)zero pivot."""

    def __init__(self, row: int, pivot: float):
        super().__init__(f"zero pivot {pivot:.3e} in tridiagonal elimination at row {row}")
        self.row = row
        self.pivot = pivot


@dataclass(frozen=True)
class TriFactorization:
    lower: np.ndarray
    """Elimination multipliers; ``lower[0]`` is unused (0)."""
    pivots: np.ndarray
    sup: np.ndarray

    @property
    def size(self) -> int:
        return len(self.pivots)


def _bands(sub, diag, sup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sub, diag, sup = (np.ascontiguousarray(b, dtype=float) for b in (sub, diag, sup))
    n = len(diag)
    if n < 1:
        raise ValueError("tridiagonal system must have at least one row")
    if sub.shape != (n,) or sup.shape != (n,):
        raise ValueError(
            f"band lengths must match: sub={sub.shape}, diag={diag.shape}, sup={sup.shape}"
        )
    return sub, diag, sup


def factorize(sub, diag, sup) -> TriFactorization:
    """Forward elimination without pivoting.

    Bands are full length ``n``; ``sub[0]`` and ``sup[n-1]`` are ignored.
    """
    sub, diag, sup = _bands(sub, diag, sup)
    n = len(diag)
    tol = PIVOT_RTOL * float(np.max(np.abs(diag)))
    lower = np.zeros(n)
    piv = np.empty(n)
    piv[0] = diag[0]
    if not abs(piv[0]) > tol:
        raise SingularSystemError(0, piv[0])
    for i in range(1, n):
        lower[i] = sub[i] / piv[i - 1]
        piv[i] = diag[i] - lower[i] * sup[i - 1]
        if not abs(piv[i]) > tol:
            raise SingularSystemError(i, piv[i])
    sup = sup.copy()
    sup[-1] = 0.0
    for a in (lower, piv, sup):
        a.flags.writeable = False
    return TriFactorization(lower=lower, pivots=piv, sup=sup)


def solve(f: TriFactorization, rhs, *, backend: str | None = None) -> np.ndarray:
    rhs = np.ascontiguousarray(rhs, dtype=float)
    if rhs.shape != (f.size,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({f.size},)")
    out = np.empty(f.size)
    _backend.get(backend).thomas_solve(f.lower, f.pivots, f.sup, rhs, out)
    return out


def dominance_report(sub, diag, sup) -> np.ndarray:
    """Row margins ``|diag| - (|sub| + |sup|)``; negative means not dominant."""
    sub, diag, sup = _bands(sub, diag, sup)
    off = np.abs(sub) + np.abs(sup)
    off[0] -= abs(sub[0])
    off[-1] -= abs(sup[-1])
    return np.abs(diag) - off


def to_dense(sub, diag, sup) -> np.ndarray:
    sub, diag, sup = _bands(sub, diag, sup)
    return np.diag(diag) + np.diag(sub[1:], -1) + np.diag(sup[:-1], 1)
