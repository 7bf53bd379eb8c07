"""Command-line front end.

    fracbs solve     --problem manufactured --mu 0.5 --grid-j 50 --steps-n 50
    fracbs price     --strike 100 --kind call --mu 0.7
    fracbs converge  --vary time --values 20,40,80,160 --mu 0.5 --grid-j 200
    fracbs tables    2 3

Settings come from built-in defaults, then an optional TOML file given with
``--config``, then flags (flags win). Exit codes: 0 success, 1 validation
error, 2 solver error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from fracbs import __version__, _backend
from fracbs.basis import EVALUATIONS
from fracbs.grid import Grid
from fracbs.marcher import SOURCE_RULES, StepError, run
from fracbs.problems import (
    MarketParams,
    black_scholes_problem,
    constant_problem,
    manufactured_problem,
    to_financial,
)
from fracbs.tridiag import SingularSystemError
from fracbs.verification import L2_CONVENTION, TABLES, reproduce_table, run_sweep
from fracbs.verification.oracles import QuadratureError
from fracbs.verification.tables import REPRODUCTION_CONSTANTS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("fracbs")

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3
PROBLEMS = ("manufactured", "zero", "constant", "black-scholes")


class ValidationError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class MarketConfig:
    r: float = 0.05
    sigma: float = 0.25
    div: float = 0.0
    expiry: float = 1.0
    strike: float = 100.0
    kind: str = "call"
    zeta_min: float | None = None
    zeta_max: float | None = None


@dataclass
class RunConfig:
    command: str = "solve"
    problem: str = "manufactured"
    mu: float = 0.5
    p: float = 1.0
    grid_j: int = 50
    steps_n: int | None = 50
    value: float = 1.0
    source_rule: str = "average"
    constants: str = "stable"
    format: str = "csv"
    out: str | None = None
    jobs: int = 1
    vary: str = "time"
    values: list[int] = field(default_factory=list)
    ids: list[int] = field(default_factory=list)
    market: MarketConfig = field(default_factory=MarketConfig)


# ---------------------------------------------------------------- parsing

def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # usage errors share the validation exit code; 2 is reserved for solver failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracbs", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--mu", type=float, help="fractional order, 0 < mu < 1")
    shared.add_argument("--p", type=float, help="spline tension parameter (> 0)")
    shared.add_argument("--grid-j", type=int, dest="grid_j", help="number of space intervals J")
    shared.add_argument("--steps-n", type=int, dest="steps_n", help="number of time steps N")
    shared.add_argument("--config", help="TOML file with run settings")
    shared.add_argument("--out", help="output file (default: stdout)")
    shared.add_argument("--format", choices=("csv", "json"))
    shared.add_argument("--source-rule", dest="source_rule", choices=SOURCE_RULES)
    shared.add_argument("--constants", choices=EVALUATIONS, help="spline constant evaluation")
    shared.add_argument("-v", "--verbose", action="store_true")

    market = argparse.ArgumentParser(add_help=False)
    g = market.add_argument_group("market parameters")
    g.add_argument("--r", type=float, help="risk-free rate")
    g.add_argument("--sigma", type=float, help="volatility")
    g.add_argument("--div", type=float, help="dividend rate")
    g.add_argument("--expiry", type=float, help="expiry T")
    g.add_argument("--strike", type=float, help="strike K")
    g.add_argument("--kind", choices=("call", "put"))
    g.add_argument("--zeta-min", type=float, dest="zeta_min", help="lower truncation price")
    g.add_argument("--zeta-max", type=float, dest="zeta_max", help="upper truncation price")

    p = sub.add_parser("solve", parents=[shared, market], help="solve one problem and write the nodal surface")
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--value", type=float, help="level of the 'constant' problem")

    sub.add_parser("price", parents=[shared, market], help="price a European option (zeta, t, W)")

    p = sub.add_parser("converge", parents=[shared], help="refinement study on the manufactured problem")
    p.add_argument("--vary", choices=("time", "space"), help="refine N (fixed J) or J (N = J^2 unless --steps-n)")
    p.add_argument("--values", type=_int_list, help="comma-separated N or J values, each double the previous")
    p.add_argument("--jobs", type=int, help="worker processes")

    p = sub.add_parser("tables", parents=[shared], help="reproduce the benchmark tables")
    p.add_argument("ids", nargs="*", type=int, help=f"table ids from {sorted(TABLES)} (default: all)")
    p.add_argument("--jobs", type=int, help="worker processes")
    return parser


def _load_file(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then flags."""
    cfg = RunConfig(command=args.command)
    if args.command == "tables":
        cfg.constants = REPRODUCTION_CONSTANTS
    if args.command == "price":
        cfg.problem = "black-scholes"
        cfg.mu, cfg.p, cfg.grid_j, cfg.steps_n = 0.7, 1.0, 200, 200
    if args.command == "converge":
        cfg.p, cfg.grid_j, cfg.steps_n = 0.01, 200, None

    unknown = []
    data = _load_file(args.config) if getattr(args, "config", None) else {}
    for key, val in data.items():
        key = key.replace("-", "_")
        if key == "market" and isinstance(val, dict):
            for mk, mv in val.items():
                mk = mk.replace("-", "_")
                if hasattr(cfg.market, mk):
                    setattr(cfg.market, mk, mv)
                else:
                    unknown.append(f"market.{mk}")
        elif key == "sweep" and isinstance(val, dict):
            cfg.vary = val.get("vary", cfg.vary)
            if "values" in val:
                cfg.values = [int(v) for v in val["values"]]
        elif hasattr(cfg, key) and key not in ("command", "market"):
            setattr(cfg, key, val)
        else:
            unknown.append(key)
    if unknown:
        raise ValidationError([f"unknown config key(s): {', '.join(unknown)}"])

    for key in ("mu", "p", "grid_j", "steps_n", "out", "format", "source_rule", "constants",
                "problem", "value", "jobs", "vary", "values", "ids"):
        val = getattr(args, key, None)
        if val is not None and val != []:
            setattr(cfg, key, val)
    for key in ("r", "sigma", "div", "expiry", "strike", "kind", "zeta_min", "zeta_max"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg.market, key, val)
    if args.command == "price":
        cfg.problem = "black-scholes"
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    """Collect every violated constraint, then raise once."""
    errs = []
    if not 0.0 < float(cfg.mu) < 1.0:
        errs.append(f"--mu must satisfy 0 < mu < 1 (got {cfg.mu})")
    if not float(cfg.p) > 0.0:
        errs.append(f"--p must be positive (got {cfg.p})")
    if int(cfg.grid_j) < 2:
        errs.append(f"--grid-j must be at least 2 (got {cfg.grid_j})")
    if cfg.steps_n is not None and int(cfg.steps_n) < 1:
        errs.append(f"--steps-n must be at least 1 (got {cfg.steps_n})")
    if cfg.problem not in PROBLEMS:
        errs.append(f"problem must be one of {PROBLEMS} (got {cfg.problem!r})")
    if cfg.source_rule not in SOURCE_RULES:
        errs.append(f"source rule must be one of {SOURCE_RULES} (got {cfg.source_rule!r})")
    if cfg.constants not in EVALUATIONS:
        errs.append(f"constants must be one of {EVALUATIONS} (got {cfg.constants!r})")
    if cfg.format not in ("csv", "json"):
        errs.append(f"--format must be csv or json (got {cfg.format!r})")
    if int(cfg.jobs) < 1:
        errs.append(f"--jobs must be at least 1 (got {cfg.jobs})")

    if cfg.problem == "black-scholes" and cfg.command in ("solve", "price"):
        m = cfg.market
        if not m.sigma > 0:
            errs.append(f"--sigma must be positive (got {m.sigma})")
        if not m.r > 0:
            errs.append(f"--r must be positive (got {m.r})")
        if not m.expiry > 0:
            errs.append(f"--expiry must be positive (got {m.expiry})")
        if not m.strike > 0:
            errs.append(f"--strike must be positive (got {m.strike})")
        if not m.div >= 0:
            errs.append(f"--div must be nonnegative (got {m.div})")
        if m.kind not in ("call", "put"):
            errs.append(f"--kind must be call or put (got {m.kind!r})")
        if (m.zeta_min is None) != (m.zeta_max is None):
            errs.append("--zeta-min and --zeta-max must be given together")
        elif m.zeta_min is not None and not 0 < m.zeta_min < m.strike < m.zeta_max:
            errs.append(f"need 0 < zeta-min < strike < zeta-max (got {m.zeta_min}, {m.strike}, {m.zeta_max})")

    if cfg.command == "converge":
        if cfg.vary not in ("time", "space"):
            errs.append(f"--vary must be time or space (got {cfg.vary!r})")
        vals = list(cfg.values)
        if len(vals) < 2:
            errs.append("a convergence sweep needs at least 2 refinements (--values)")
        elif any(b != 2 * a for a, b in zip(vals, vals[1:])):
            errs.append(f"--values must double at each refinement (got {vals})")
        elif cfg.vary == "space" and vals[0] < 2:
            errs.append("space refinement needs J >= 2")
    if cfg.command == "tables":
        bad = [i for i in cfg.ids if i not in TABLES]
        if bad:
            errs.append(f"unknown table id(s) {bad}; choose from {sorted(TABLES)}")
    if errs:
        raise ValidationError(errs)


# ---------------------------------------------------------------- output

def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.15e}"
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v


def render(meta: dict, columns: list[str], rows, fmt_name: str) -> str:
    if fmt_name == "json":
        doc = {
            "meta": meta,
            "columns": columns,
            "rows": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k} = {json.dumps(v, sort_keys=True)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {
        "fracbs_version": __version__,
        "command": cfg.command,
        "config": _config_dict(cfg),
        "backend": _backend.BACKEND,
        "l2_convention": L2_CONVENTION,
    }
    meta.update(extra)
    return meta


def _config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d.pop("out", None)
    d.pop("command", None)
    if cfg.command not in ("converge",):
        d.pop("vary"), d.pop("values")
    if cfg.command != "tables":
        d.pop("ids")
    if cfg.problem != "black-scholes" or cfg.command in ("converge", "tables"):
        d.pop("market")
    if cfg.problem != "constant":
        d.pop("value")
    return d


# ---------------------------------------------------------------- commands

def _market(cfg: RunConfig) -> MarketParams:
    m = cfg.market
    rng = (m.zeta_min, m.zeta_max) if m.zeta_min is not None else None
    return MarketParams(r=m.r, sigma=m.sigma, div=m.div, expiry=m.expiry, strike=m.strike, zeta_range=rng)


def _problem(cfg: RunConfig):
    if cfg.problem == "manufactured":
        return manufactured_problem(cfg.mu)
    if cfg.problem == "zero":
        return constant_problem(0.0)
    if cfg.problem == "constant":
        return constant_problem(cfg.value)
    return black_scholes_problem(_market(cfg), cfg.market.kind)


def cmd_solve(cfg: RunConfig) -> str:
    spec = _problem(cfg)
    grid = Grid(spec.domain[0], spec.domain[1], cfg.grid_j, spec.horizon, cfg.steps_n)
    res = run(spec, grid, cfg.mu, cfg.p, source_rule=cfg.source_rule, constants=cfg.constants)
    extra = {"problem": spec.name, "domain": list(spec.domain), "horizon": spec.horizon}
    if cfg.problem == "black-scholes":
        surf = to_financial(res.nodal, grid, spec.horizon)
        rows = list(surf.triples())
        return render(_meta(cfg, **extra), ["zeta", "t", "W"], rows, cfg.format)
    rows = [(y, t, u) for n, t in enumerate(grid.tau) for y, u in zip(grid.y, res.nodal[n])]
    if spec.exact is not None:
        exact = spec.exact(grid.y[None, :], grid.tau[:, None]) * np.ones_like(res.nodal)
        rows = [(y, t, u, e) for (y, t, u), e in zip(rows, exact.ravel())]
        return render(_meta(cfg, **extra), ["y", "tau", "u", "exact"], rows, cfg.format)
    return render(_meta(cfg, **extra), ["y", "tau", "u"], rows, cfg.format)


def cmd_converge(cfg: RunConfig) -> str:
    if cfg.vary == "time":
        if cfg.steps_n is not None:
            log.info("--steps-n is ignored for a time sweep")
        configs = [(cfg.mu, cfg.p, cfg.grid_j, n) for n in cfg.values]
        rule = f"N in {cfg.values}, J = {cfg.grid_j}"
    else:
        # dtau = dy^2 on the unit interval unless a fixed N was requested
        fixed = cfg.steps_n
        configs = [(cfg.mu, cfg.p, j, fixed or j * j) for j in cfg.values]
        rule = f"J in {cfg.values}, " + (f"N = {fixed}" if fixed else "N = J^2")
    reports = run_sweep(configs, jobs=cfg.jobs, source_rule=cfg.source_rule, constants=cfg.constants)
    cols = ["mu", "p", "J", "N", "l2", "linf", "rate_l2", "rate_linf"]
    rows = [(r.mu, r.p, r.J, r.N, r.l2, r.linf, r.rate_l2, r.rate_linf) for r in reports]
    return render(_meta(cfg, problem="manufactured", refinement=rule), cols, rows, cfg.format)


def cmd_tables(cfg: RunConfig) -> str:
    ids = cfg.ids or sorted(TABLES)
    cols = ["table", "mu", "p", "J", "N", "norm", "computed", "printed", "rel_diff",
            "computed_rate", "printed_rate", "error_ok", "rate_ok", "pass", "reference_methods"]
    rows = []
    for tid in ids:
        for r in reproduce_table(tid, jobs=cfg.jobs, constants=cfg.constants):
            refs = ";".join(
                f"{name}={fmt(e)}" + (f"/{fmt(rt)}" if rt is not None else "")
                for name, (e, rt) in sorted(r.others.items())
            )
            rows.append((r.table, r.report.mu, r.report.p, r.report.J, r.report.N, r.norm, r.computed,
                         r.printed, r.rel_error, r.computed_rate, r.printed_rate, r.error_ok,
                         r.rate_ok, r.passed, refs))
    tol = {"error_rtol": 0.10, "rate_tol": {str(t): TABLES[t].rate_tol for t in ids}}
    return render(_meta(cfg, tables=ids, tolerances=tol), cols, rows, cfg.format)


COMMANDS = {"solve": cmd_solve, "price": cmd_solve, "converge": cmd_converge, "tables": cmd_tables}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
    except ValidationError as exc:
        for msg in exc.problems:
            print(f"fracbs: error: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"fracbs: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        text = COMMANDS[cfg.command](cfg)
    except ValueError as exc:
        print(f"fracbs: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SingularSystemError, StepError, QuadratureError, ArithmeticError) as exc:
        print(f"fracbs: solver failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        emit(text, cfg.out)
    except OSError as exc:
        print(f"fracbs: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
