"""Error norms, convergence rates, independent oracles and table reproduction."""
from fracbs.verification.norms import (
    L2_CONVENTION,
    ErrorReport,
    convergence_rates,
    error_norms,
)
from fracbs.verification.oracles import caputo_oracle, dense_reference_solve, dense_solve
from fracbs.verification.tables import (
    TABLES,
    TableRow,
    calibrate_l2_convention,
    manufactured_errors,
    reproduce_table,
    run_sweep,
)

__all__ = [
    "L2_CONVENTION",
    "TABLES",
    "ErrorReport",
    "TableRow",
    "calibrate_l2_convention",
    "caputo_oracle",
    "convergence_rates",
    "dense_reference_solve",
    "dense_solve",
    "error_norms",
    "manufactured_errors",
    "reproduce_table",
    "run_sweep",
]
