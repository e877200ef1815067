#!/usr/bin/env python3
"""Compare centralized greedy against the simulated distributed solvers.

Runs a synthetic facility instance at a few ground-set sizes and prints
wall time and evaluation counts, so the speedup direction of the
partition-and-merge variants is easy to see on one machine.
"""

import argparse
import time

from twostage.distributed import (distributed_fast, recommend_machine_count,
                                  replacement_distributed)
from twostage.greedy import replacement_greedy
from twostage.objectives import make_synthetic


def timed(fn):
    start = time.perf_counter()
    sol = fn()
    return sol, time.perf_counter() - start


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,1000,2000")
    parser.add_argument("--m", type=int, default=10)
    parser.add_argument("--ell", type=int, default=25)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=17)
    args = parser.parse_args()

    print(f"{'n':>6} {'algorithm':>12} {'M':>3} {'value':>10} "
          f"{'seconds':>8} {'evals':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        F = make_synthetic("facility", n, args.m, seed=args.seed)

        before = F.evals
        sol, secs = timed(lambda: replacement_greedy(
            F, range(n), args.ell, args.k))
        print(f"{n:>6} {'greedy':>12} {1:>3} {sol.value:>10.4f} "
              f"{secs:>8.2f} {F.evals - before:>10d}")

        for name, variant, run in (
                ("distributed", "distributed",
                 lambda M: replacement_distributed(
                     F, M, args.ell, args.k, seed=args.seed)),
                ("fast", "fast",
                 lambda M: distributed_fast(
                     F, M, args.epsilon, args.ell, args.k, seed=args.seed))):
            M = recommend_machine_count(n, args.ell, variant)
            before = F.evals
            sol, secs = timed(lambda: run(M))
            print(f"{n:>6} {name:>12} {M:>3} {sol.value:>10.4f} "
                  f"{secs:>8.2f} {F.evals - before:>10d}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
