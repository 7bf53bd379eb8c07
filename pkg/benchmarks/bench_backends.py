"""Wall time of the compiled and pure-Python kernels on the manufactured problem.

    python benchmarks/bench_backends.py [--repeat 3] [--sizes 50x200,100x1000,200x2000]

Each size is JxN. Both backends solve the same problem, and the script
checks that their surfaces agree before it reports timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fracbs import _backend
from fracbs.marcher import solve_problem
from fracbs.problems import manufactured_problem


def _sizes(text):
    return [tuple(int(v) for v in item.split("x")) for item in text.split(",") if item]


def best_time(backend, J, N, mu, repeat):
    spec = manufactured_problem(mu)
    best, res = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = solve_problem(spec, mu, 1.0, J, N, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, res.nodal


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", type=_sizes, default=_sizes("50x200,100x1000,200x2000,100x4000"))
    ap.add_argument("--mu", type=float, default=0.5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    names = _backend.available()
    if "compiled" not in names:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'J':>5} {'N':>6} " + " ".join(f"{n + ' [s]':>14}" for n in names) + f" {'speedup':>8} {'max diff':>10}")
    for J, N in args.sizes:
        times, surfaces = {}, {}
        for name in names:
            times[name], surfaces[name] = best_time(name, J, N, args.mu, args.repeat)
        diff = np.max(np.abs(surfaces[names[0]] - surfaces[names[-1]]))
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{J:>5} {N:>6} " + " ".join(f"{times[n]:>14.4f}" for n in names) + f" {speed:>8.1f} {diff:>10.1e}")


if __name__ == "__main__":
    main()
