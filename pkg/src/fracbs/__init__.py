"""Time-fractional Black-Scholes solver.

Crank-Nicolson discretization of the Caputo time derivative combined with
exponential B-spline collocation in log-price.
"""
from fracbs._backend import BACKEND
from fracbs.basis import SplineBasis, basis_constants, nodal_values
from fracbs.fractional import FractionalWeights, history_term, make_weights
from fracbs.grid import Grid
from fracbs.marcher import SolveResult, nodal_row, run, solve_problem
from fracbs.problems import (
    MarketParams,
    ProblemSpec,
    black_scholes_problem,
    manufactured_problem,
    to_financial,
)
from fracbs.tridiag import SingularSystemError

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FractionalWeights",
    "Grid",
    "MarketParams",
    "ProblemSpec",
    "SingularSystemError",
    "SolveResult",
    "SplineBasis",
    "basis_constants",
    "black_scholes_problem",
    "history_term",
    "make_weights",
    "manufactured_problem",
    "nodal_row",
    "nodal_values",
    "run",
    "solve_problem",
    "to_financial",
]
