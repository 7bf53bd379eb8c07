"""Reproduction of the published benchmark tables on the manufactured problem.

All runs use the smooth test problem on [0, 1] with T = 1 and measure the
nodal error at the final time. The printed values (including the columns
of competing methods, kept for display only) are embedded as constants.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from fracbs.marcher import solve_problem
from fracbs.problems import manufactured_problem
from fracbs.verification.norms import L2_CONVENTION, ErrorReport, error_norms

ERROR_RTOL = 0.10


@dataclass(frozen=True)
class Column:
    """One printed column: a fixed (mu, p) and a refinement sequence of (J, N)."""

    mu: float
    p: float
    configs: tuple[tuple[int, int], ...]
    errors: tuple[float, ...]
    rates: tuple[float | None, ...] | None = None
    others: dict = field(default_factory=dict)
    """Comparison-method label -> (errors, rates or None); display only."""


@dataclass(frozen=True)
class TableSpec:
    table_id: int
    title: str
    norm: str
    rate_tol: float | None
    columns: tuple[Column, ...]


def _time_sweep(J, Ns):
    return tuple((J, n) for n in Ns)


_T2_N = (20, 40, 80, 160, 320, 640, 1280)
_T3_J = (8, 16, 32, 64, 128)
_T4_N = (10, 20, 40, 80, 160, 320)
_T5_N = (256, 512, 1024, 2048, 4096)
_T6_JN = ((4, 4), (8, 64), (16, 1024), (8, 8), (16, 128), (32, 2048))

TABLES: dict[int, TableSpec] = {
    2: TableSpec(2, "L2 error, p=0.01, J=200, time refinement", "l2", 0.03, (
        Column(0.9, 0.01, _time_sweep(200, _T2_N),
               (2.1966e-03, 1.0204e-03, 4.7504e-04, 2.2138e-04, 1.0322e-04, 4.8138e-05, 2.2450e-05),
               (None, 1.1061, 1.1030, 1.1015, 1.1008, 1.1005, 1.1005)),
        Column(0.7, 0.01, _time_sweep(200, _T2_N),
               (8.8682e-04, 3.5957e-04, 1.4594e-04, 5.9252e-05, 2.4059e-05, 9.7665e-06, 3.9620e-06),
               (None, 1.3024, 1.3009, 1.3004, 1.3003, 1.3007, 1.3016)),
        Column(0.5, 0.01, _time_sweep(200, _T2_N),
               (3.1351e-04, 1.1134e-04, 3.9499e-05, 1.3997e-05, 4.9530e-06, 1.7482e-06, 6.1329e-07),
               (None, 1.4935, 1.4951, 1.4967, 1.4987, 1.5024, 1.5112)),
        Column(0.3, 0.01, _time_sweep(200, _T2_N),
               (9.2986e-05, 2.9166e-05, 9.1103e-06, 2.8330e-06, 8.7453e-07, 2.6513e-07, 7.6072e-08),
               (None, 1.6727, 1.6787, 1.6852, 1.6958, 1.7218, 1.8013)),
    )),
    3: TableSpec(3, "L2 error, p=1, dtau=dy^2, space refinement", "l2", 0.05, (
        Column(0.75, 1.0, tuple((j, j * j) for j in _T3_J),
               (3.6649e-04, 7.3066e-05, 1.5023e-05, 3.1943e-06, 7.0180e-07),
               (None, 2.3265, 2.2820, 2.2336, 2.1864)),
        Column(0.5, 1.0, tuple((j, j * j) for j in _T3_J),
               (1.8191e-04, 3.9173e-05, 9.0355e-06, 2.1672e-06, 5.3059e-07),
               (None, 2.2153, 2.1162, 2.0598, 2.0302)),
        Column(0.25, 1.0, tuple((j, j * j) for j in _T3_J),
               (1.5034e-04, 3.6042e-05, 8.8757e-06, 2.2074e-06, 5.5085e-07),
               (None, 2.0605, 2.0217, 2.0075, 2.0026)),
    )),
    4: TableSpec(4, "Linf error, p=0.1, mu=0.7, J=150", "linf", 0.03, (
        Column(0.7, 0.1, _time_sweep(150, _T4_N),
               (3.1579e-03, 1.2766e-03, 5.1746e-04, 2.0999e-04, 8.5257e-05, 3.4624e-05),
               (None, 1.3067, 1.3028, 1.3011, 1.3004, 1.3000),
               others={
                   "ref_a": ((5.8210e-03, 2.3040e-03, 9.0810e-04, 3.5720e-04, 1.4110e-04, 5.3870e-05),
                                (None, 1.3372, 1.3421, 1.3461, 1.3400, 1.3892)),
                   "ref_b": ((3.5000e-03, 1.4400e-03, 5.9000e-04, 2.4000e-04, 9.5000e-05, 3.8000e-05),
                                  (None, 1.3300, 1.3150, 1.3400, 1.3600, 1.3800)),
               }),
    )),
    5: TableSpec(5, "Linf error, p=0.01, J=100", "linf", 0.03, (
        Column(0.9, 0.01, _time_sweep(100, _T5_N),
               (1.9023e-04, 8.8714e-05, 4.1380e-05, 1.9303e-05, 9.0050e-06),
               (None, 1.1005, 1.1002, 1.1001, 1.1000),
               others={"ref_c": ((2.3339e-04, 1.0896e-04, 5.0853e-05, 2.3729e-05, 1.1064e-05),
                                (None, 1.0989, 1.0994, 1.0997, 1.1008))}),
        Column(0.5, 0.01, _time_sweep(100, _T5_N),
               (9.9829e-06, 3.5353e-06, 1.2518e-06, 4.4338e-07, 1.5731e-07),
               (None, 1.4976, 1.4978, 1.4974, 1.4949),
               others={"ref_c": ((1.3091e-05, 4.6540e-06, 1.6518e-06, 5.8557e-07, 2.0715e-07),
                                (None, 1.4920, 1.4944, 1.4961, 1.4991))}),
    )),
    6: TableSpec(6, "Linf error, p=0.1, joint (J, N) refinement", "linf", None, (
        Column(0.2, 0.1, _T6_JN,
               (8.0178e-04, 1.0281e-05, 6.4780e-07, 1.9037e-04, 2.9444e-06, 1.6358e-07),
               others={"ref_a": ((3.1280e-02, 6.7910e-04, 2.5030e-05, 1.3810e-02, 5.2460e-04, 2.3070e-05), None)}),
        Column(0.7, 0.1, _T6_JN,
               (1.0060e-02, 2.7454e-04, 7.9848e-06, 4.1197e-03, 1.1409e-04, 3.1896e-06),
               others={"ref_a": ((2.0560e-02, 4.1590e-04, 1.6720e-05, 1.0160e-02, 3.2180e-04, 1.2730e-05), None)}),
    )),
}


@dataclass(frozen=True)
class TableRow:
    table: int
    norm: str
    report: ErrorReport
    printed: float
    printed_rate: float | None
    rate_tol: float | None
    others: dict = field(default_factory=dict)

    @property
    def computed(self) -> float:
        return self.report.norm(self.norm)

    @property
    def computed_rate(self) -> float | None:
        return self.report.rate(self.norm)

    @property
    def rel_error(self) -> float:
        return abs(self.computed - self.printed) / self.printed

    @property
    def error_ok(self) -> bool:
        return self.rel_error <= ERROR_RTOL

    @property
    def rate_ok(self) -> bool | None:
        if self.printed_rate is None or self.rate_tol is None:
            return None
        if self.computed_rate is None:
            return False
        return abs(self.computed_rate - self.printed_rate) <= self.rate_tol

    @property
    def passed(self) -> bool:
        return self.error_ok and self.rate_ok is not False


def manufactured_errors(mu: float, p: float, J: int, N: int, *, convention: str = L2_CONVENTION,
                        source_rule: str = "average", constants: str = "stable",
                        backend: str | None = None) -> ErrorReport:
    """Final-time nodal errors of one manufactured-problem run."""
    spec = manufactured_problem(mu)
    res = solve_problem(spec, mu, p, J, N, source_rule=source_rule, constants=constants, backend=backend)
    exact = spec.exact(res.grid.y, res.grid.T)
    l2, linf = error_norms(res.nodal[-1], exact, res.grid.dy, convention)
    return ErrorReport(l2=l2, linf=linf, mu=mu, p=p, J=J, N=N)


def _run_config(args):
    mu, p, J, N, kw = args
    return manufactured_errors(mu, p, J, N, **kw)


def run_sweep(configs, *, jobs: int = 1, **kw) -> list[ErrorReport]:
    """Run ``(mu, p, J, N)`` configs and attach rates along the sequence.

    Extra keywords go to :func:`manufactured_errors`. Results come back in
    input order regardless of ``jobs``.
    """
    work = [(mu, p, J, N, kw) for mu, p, J, N in configs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_run_config, work))
    else:
        raw = [_run_config(w) for w in work]
    out, prev = [], None
    for r in raw:
        r = r.with_rates(prev)
        out.append(r)
        prev = r
    return out


REPRODUCTION_CONSTANTS = "literal"
"""Spline constants used for table reproduction.

The published small-error entries (Table 2, mu=0.3, N >= 640) carry the
cancellation error of the literal sinh/cosh quotients at p*dy = 5e-5; the
stable evaluation lands 3-12% away there and matches everywhere else.
"""


def reproduce_table(table_id: int, *, jobs: int = 1, constants: str = REPRODUCTION_CONSTANTS,
                    backend: str | None = None) -> list[TableRow]:
    try:
        spec = TABLES[table_id]
    except KeyError:
        raise ValueError(f"unknown table id {table_id}; expected one of {sorted(TABLES)}") from None
    rows = []
    for col in spec.columns:
        reports = run_sweep([(col.mu, col.p, J, N) for J, N in col.configs], jobs=jobs,
                            constants=constants, backend=backend)
        if col.rates is None:
            reports = [r.with_rates(None) for r in reports]
        for k, rep in enumerate(reports):
            others = {name: (errs[k], rates[k] if rates else None) for name, (errs, rates) in col.others.items()}
            rows.append(TableRow(
                table=table_id, norm=spec.norm, report=rep, printed=col.errors[k],
                printed_rate=col.rates[k] if col.rates else None, rate_tol=spec.rate_tol, others=others,
            ))
    return rows


def calibrate_l2_convention(constants: str = REPRODUCTION_CONSTANTS, backend: str | None = None) -> dict:
    """Pick the discrete L2 convention matching the first Table 2 entry within 10%."""
    col = TABLES[2].columns[0]
    J, N = col.configs[0]
    printed = col.errors[0]
    found = {}
    for conv in ("weighted", "unweighted"):
        rep = manufactured_errors(col.mu, col.p, J, N, convention=conv, constants=constants, backend=backend)
        found[conv] = rep.l2
    rel = {c: abs(v - printed) / printed for c, v in found.items()}
    best = min(rel, key=rel.get)
    return dict(
        convention=best if rel[best] <= ERROR_RTOL else None,
        printed=printed, computed=found, rel_diff=rel, config=dict(mu=col.mu, p=col.p, J=J, N=N),
    )
