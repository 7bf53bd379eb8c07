"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the summary lines appear at
the end of the session) or directly as ``python tests/test_acceptance.py``.
Diagnostic lines are informational and never decide the outcome.
"""
from __future__ import annotations

import math
import os
import sys

import numpy as np
import pytest

from fracbs import tridiag
from fracbs.assembly import build_stencil, reduced_bands
from fracbs.basis import basis_constants
from fracbs.fractional import discrete_caputo, make_weights
from fracbs.grid import Grid
from fracbs.marcher import run, solve_problem
from fracbs.problems import MarketParams, black_scholes_problem, constant_problem, manufactured_problem, zero_problem
from fracbs.verification import caputo_oracle, dense_reference_solve, dense_solve, reproduce_table, run_sweep
from fracbs.verification.tables import ERROR_RTOL, TABLES

JOBS = min(4, os.cpu_count() or 1)

RESULTS: dict[int, tuple[bool, str]] = {}
DIAGNOSTICS: list[str] = []

TITLES = {
    1: "Table 2 reproduction (L2, p=0.01, J=200)",
    2: "Table 3 reproduction (L2, p=1, dtau=dy^2)",
    3: "Tables 4/5/6 present-method columns (Linf)",
    4: "Order of accuracy in time and space",
    5: "Oracle suite (Caputo, Thomas, dense end-to-end, PDE residual)",
    6: "Fixed point and null problem",
    7: "Stability probe (dtau/dy^2 up to 100)",
    8: "Pricing mode sanity bounds",
}


def summary_lines() -> list[str]:
    lines = []
    for k in sorted(TITLES):
        if k in RESULTS:
            ok, detail = RESULTS[k]
            lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {TITLES[k]} -- {detail}")
        else:
            lines.append(f"[SKIP] criterion {k}: {TITLES[k]} -- not run")
    return lines + [f"  note: {d}" for d in DIAGNOSTICS]


def _record(k: int, ok: bool, detail: str, failures=()) -> None:
    RESULTS[k] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {TITLES[k]} -- {detail}")
    assert ok, "\n".join([detail, *failures])


def _table_failures(rows) -> list[str]:
    out = []
    for r in rows:
        if not r.passed:
            rate = "" if r.rate_ok is None else f", rate {r.computed_rate:.4f} vs {r.printed_rate:.4f}"
            out.append(f"table {r.table} mu={r.report.mu} J={r.report.J} N={r.report.N}: "
                       f"{r.computed:.4e} vs {r.printed:.4e} (rel {r.rel_error:.3f}){rate}")
    return out


def _table_detail(rows) -> str:
    worst_err = max(r.rel_error for r in rows)
    rate_diffs = [abs(r.computed_rate - r.printed_rate) for r in rows if r.rate_ok is not None and r.computed_rate]
    worst_rate = max(rate_diffs) if rate_diffs else float("nan")
    passed = sum(r.passed for r in rows)
    return f"{passed}/{len(rows)} entries; max rel error {worst_err:.2e}, max rate diff {worst_rate:.2e}"


# ------------------------------------------------------------------ 1-3


def test_criterion_1_table2():
    rows = reproduce_table(2, jobs=JOBS)
    # sensitivity to how the spline constants are evaluated (informational)
    col = TABLES[2].columns[3]
    stable = run_sweep([(col.mu, col.p, J, N) for J, N in col.configs], jobs=JOBS, constants="stable")
    rel = [abs(r.l2 - e) / e for r, e in zip(stable, col.errors)]
    DIAGNOSTICS.append(
        f"Table 2 mu=0.3 with stable spline constants: max rel error {max(rel):.3f} "
        f"({sum(x <= ERROR_RTOL for x in rel)}/{len(rel)} within 10%); harness uses literal constants"
    )
    _record(1, all(r.passed for r in rows), _table_detail(rows), _table_failures(rows))


def test_criterion_2_table3():
    rows = reproduce_table(3, jobs=JOBS)
    _record(2, all(r.passed for r in rows), _table_detail(rows), _table_failures(rows))


def test_criterion_3_tables_4_5_6():
    rows = [r for t in (4, 5, 6) for r in reproduce_table(t, jobs=JOBS)]
    _record(3, all(r.passed for r in rows), _table_detail(rows), _table_failures(rows))


# ------------------------------------------------------------------ 4


def test_criterion_4_orders():
    failures, parts = [], []
    for mu in (0.3, 0.5, 0.7, 0.9):
        reps = run_sweep([(mu, 0.01, 200, n) for n in (160, 320, 640)], jobs=JOBS)
        rate = reps[-1].rate_l2
        parts.append(f"t(mu={mu})={rate:.3f}")
        if not rate >= 2 - mu - 0.1:
            failures.append(f"time order {rate:.3f} < {2 - mu - 0.1:.2f} at mu={mu}")
    for mu in (0.25, 0.5, 0.75):
        reps = run_sweep([(mu, 1.0, j, j * j) for j in (16, 32, 64)], jobs=JOBS)
        rate = reps[-1].rate_l2
        parts.append(f"y(mu={mu})={rate:.3f}")
        if not rate >= 1.9:
            failures.append(f"space order {rate:.3f} < 1.9 at mu={mu}")
    _record(4, not failures, "observed orders " + ", ".join(parts), failures)


# ------------------------------------------------------------------ 5


def _caputo_orders():
    worst = math.inf
    cases = [(math.exp, math.exp), (math.sin, math.cos), (lambda t: t * t, lambda t: 2 * t)]
    for mu in (0.1, 0.3, 0.5, 0.7, 0.9):
        for f, df in cases:
            errs = []
            for N in (16, 32, 64):
                dt = 1.0 / N
                w = make_weights(mu, dt, N)
                u = np.array([f(n * dt) for n in range(N + 1)])
                errs.append(max(abs(discrete_caputo(w, u, n) - caputo_oracle(f, mu, (n + 0.5) * dt, df=df))
                                for n in range(N)))
            worst = min(worst, math.log2(errs[-2] / errs[-1]) - (2 - mu - 0.1))
    return worst


def _thomas_vs_dense():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(1, 17):
        for _ in range(10):
            sub, sup = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
            diag = np.abs(sub) + np.abs(sup) + rng.uniform(0.05, 1.0, n)
            b = rng.normal(size=n)
            x = tridiag.solve(tridiag.factorize(sub, diag, sup), b)
            ref = dense_solve(tridiag.to_dense(sub, diag, sup), b)
            worst = max(worst, np.linalg.norm(x - ref) / np.linalg.norm(ref))
    return worst


def _dense_end_to_end():
    worst = 0.0
    for mu in (0.3, 0.5, 0.9):
        for p in (0.01, 1.0):
            spec = manufactured_problem(mu)
            grid = Grid(0.0, 1.0, 4, 1.0, 4)
            res = run(spec, grid, mu, p)
            ref = dense_reference_solve(spec, grid, mu, p)
            worst = max(worst, np.max(np.abs(res.nodal - ref)) / np.max(np.abs(ref)))
    return worst


def _pde_residual():
    rng = np.random.default_rng(11)
    worst = 0.0
    for mu in (0.25, 0.5, 0.75):
        spec = manufactured_problem(mu)
        k1, k2, k3 = spec.kappas
        for y, tau in zip(rng.uniform(0, 1, 20), rng.uniform(0.01, 1, 20)):
            shape = y * y * (1 - y)
            lhs = caputo_oracle(lambda t: (t + 1) ** 2 * shape, mu, tau)
            c = (tau + 1) ** 2
            rhs = k1 * c * (2 - 6 * y) + k2 * c * (2 * y - 3 * y * y) - k3 * c * shape
            rhs += float(spec.source(np.array(y), np.array(tau)))
            worst = max(worst, abs(lhs - rhs))
    return worst


def test_criterion_5_oracles():
    margin = _caputo_orders()
    thomas = _thomas_vs_dense()
    dense = _dense_end_to_end()
    resid = _pde_residual()
    checks = {
        "(a) Caputo order margin over 2-mu-0.1": (margin, margin >= 0),
        "(b) Thomas vs dense rel": (thomas, thomas <= 1e-12),
        "(c) dense end-to-end rel": (dense, dense <= 1e-12),
        "(d) PDE residual": (resid, resid <= 1e-8),
    }
    detail = "; ".join(f"{k} {v:.2e}" for k, (v, _) in checks.items())
    _record(5, all(ok for _, ok in checks.values()), detail, [k for k, (_, ok) in checks.items() if not ok])


# ------------------------------------------------------------------ 6


def test_criterion_6_fixed_point_and_null():
    worst_const = 0.0
    for mu in (0.1, 0.5, 0.9):
        for p in (0.01, 1.0, 10.0):
            c = 3.5
            res = solve_problem(constant_problem(c), mu, p, 16, 100)
            worst_const = max(worst_const, np.max(np.abs(res.nodal - c)) / c)
    worst_zero = max(np.max(np.abs(solve_problem(zero_problem(), mu, 1.0, 16, 100).nodal)) for mu in (0.1, 0.5, 0.9))
    ok = worst_const <= 1e-11 and worst_zero <= 1e-13
    _record(6, ok, f"constant state rel dev {worst_const:.2e} over 100 steps; zero problem max {worst_zero:.2e}")


# ------------------------------------------------------------------ 7


def test_criterion_7_stability():
    J = 20
    dy = 1.0 / J
    failures, worst = [], 0.0
    for mu in (0.3, 0.5, 0.7, 0.9):
        spec = manufactured_problem(mu)
        for ratio in (0.1, 1.0, 10.0, 100.0):
            N = int(round(1.0 / (ratio * dy * dy)))
            res = solve_problem(spec, mu, 1.0, J, N)
            exact_max = np.max(np.abs(spec.exact(res.grid.y[None, :], res.grid.tau[:, None])))
            growth = np.max(np.abs(res.nodal)) / exact_max
            worst = max(worst, growth)
            if not growth <= 10.0:
                failures.append(f"mu={mu} ratio={ratio}: max|U| / max|u| = {growth:.2f}")
    margins = []
    for mu in (0.3, 0.5, 0.7, 0.9):
        for ratio in (0.1, 1.0, 10.0):
            w = make_weights(mu, ratio * dy, 1)
            s = build_stencil(basis_constants(1.0, dy), w, manufactured_problem(mu).kappas)
            margins.append(tridiag.dominance_report(*reduced_bands(s, J + 1)).min())
    DIAGNOSTICS.append(f"stability probe: min diagonal-dominance margin {min(margins):.3e} "
                       f"over mu in {{0.3,0.5,0.7,0.9}}, dtau/dy in {{0.1,1,10}}")
    _record(7, not failures, f"max |U|/max|u| = {worst:.3f} (bound 10) over 16 runs", failures)


# ------------------------------------------------------------------ 8


def _price_violations(mu, J, N, m):
    spec = black_scholes_problem(m, "call")
    res = solve_problem(spec, mu, 1.0, J, N)
    W = res.nodal
    zeta = np.exp(res.grid.y)[None, :]
    tau = res.grid.tau[:, None]
    payoff = np.maximum(zeta - m.strike, 0.0)
    return {
        "negative": -W.min(),
        "monotone": -np.diff(W, axis=1).min(),
        "below payoff": (payoff - W).max(),
        "above zeta e^-D tau": (W - zeta * np.exp(-m.div * tau)).max(),
    }


def test_criterion_8_pricing():
    tol = 1e-8
    m = MarketParams(r=0.05, sigma=0.25, div=0.0, expiry=1.0, strike=100.0)
    runs = [(0.7, 200, 200)] + [(mu, J, J) for mu in (0.3, 0.5, 0.7, 0.9) for J in (50, 100)]
    failures, worst = [], 0.0
    for mu, J, N in runs:
        for name, v in _price_violations(mu, J, N, m).items():
            worst = max(worst, v)
            if v > tol:
                failures.append(f"mu={mu} J={J} N={N}: {name} by {v:.3e}")
    diag = _price_violations(0.9, 50, 500, m)
    DIAGNOSTICS.append(
        "pricing, mu=0.9 J=50 N=500 (dtau/dy^2=1.25, outside the gated runs): "
        + ", ".join(f"{k} {max(v, 0.0):.2e}" for k, v in diag.items())
    )
    _record(8, not failures, f"{len(runs)} call surfaces, largest bound violation {max(worst, 0.0):.2e} (tol 1e-8)",
            failures)


if __name__ == "__main__":
    # the summary is printed by the terminal-summary hook in conftest.py
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
