#!/usr/bin/env python3
"""Benchmark the search kernel: numba backend vs the pure-Python fallback.

Runs the same pinned searches under both backends (ZMSQ_BACKEND is consulted
per call), checks the reports agree, and prints wall times and speedup.
JIT compilation is warmed up out-of-band so the numbers compare steady states.

    python3 benchmarks/bench_search.py
    python3 benchmarks/bench_search.py --group Z2xZ8 --n 4 --budget 2000000
"""

import argparse
import os
import time

from zmsq import GroupSpec, exhaustive_search, parse_group
from zmsq._search import HAVE_NUMBA


def run_case(spec, n, mu, budget, backend):
    os.environ["ZMSQ_BACKEND"] = backend
    try:
        t0 = time.perf_counter()
        rep = exhaustive_search(spec, n, mu=mu, budget=budget, cap=1)
        dt = time.perf_counter() - t0
    finally:
        os.environ.pop("ZMSQ_BACKEND", None)
    return rep, dt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default=None, help="bench a single group instead of the default set")
    ap.add_argument("--n", type=int, default=None)
    ap.add_argument("--mu", default=None, help="comma-separated target constant")
    ap.add_argument("--budget", type=int, default=1_000_000)
    args = ap.parse_args()

    if args.group:
        mu = tuple(int(x) for x in args.mu.split(",")) if args.mu else None
        cases = [(parse_group(args.group), args.n, mu, args.budget)]
    else:
        cases = [
            (GroupSpec((9,)), 3, (0,), 10_000_000),
            (GroupSpec((3, 3)), 3, (0, 0), 10_000_000),
            (GroupSpec((2, 8)), 4, (0, 0), args.budget),
            (GroupSpec((4, 4)), 4, None, args.budget),
        ]

    if not HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return

    # warm the JIT so compile time stays out of the comparison
    run_case(GroupSpec((4,)), 2, None, 1000, "numba")

    header = f"{'case':24s} {'nodes':>12s} {'python (s)':>12s} {'numba (s)':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for spec, n, mu, budget in cases:
        label = f"{spec.name()} n={n} mu={mu}"
        rep_nb, t_nb = run_case(spec, n, mu, budget, "numba")
        rep_py, t_py = run_case(spec, n, mu, budget, "python")
        assert (rep_py.count, rep_py.nodes, rep_py.exhaustive) == (
            rep_nb.count,
            rep_nb.nodes,
            rep_nb.exhaustive,
        ), f"backend mismatch on {label}"
        speed = t_py / t_nb if t_nb > 0 else float("inf")
        print(f"{label:24s} {rep_nb.nodes:>12d} {t_py:>12.4f} {t_nb:>12.4f} {speed:>8.1f}x")


if __name__ == "__main__":
    main()
