#!/usr/bin/env python3
"""Sweep the streaming accuracy knob and report value vs memory.

Larger epsilon means a coarser threshold grid: fewer parallel instances,
less peak storage, and a weaker worst-case guarantee. This script makes
that trade visible on one synthetic instance.
"""

import argparse

from twostage.cli import ExperimentConfig, emit_report, run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--objective", default="coverage",
                        choices=("modular", "coverage", "facility"))
    parser.add_argument("--n", type=int, default=60)
    parser.add_argument("--m", type=int, default=5)
    parser.add_argument("--ell", type=int, default=5)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epsilons", default="0.1,0.2,0.5,1.0,2.0")
    parser.add_argument("--output", default=None,
                        help="optional report path stem (.csv/.json)")
    args = parser.parse_args()

    epsilons = tuple(float(e) for e in args.epsilons.split(","))
    config = ExperimentConfig(objective=args.objective, n=args.n, m=args.m,
                              ells=(args.ell,), ks=(args.k,),
                              epsilons=epsilons, seed=args.seed,
                              algorithms=("greedy", "streaming"))
    rows = run_experiment(config)

    baseline = next(r.value for r in rows if r.algorithm == "greedy")
    print(f"greedy baseline: {baseline:.6f}")
    print(f"{'epsilon':>8} {'value':>12} {'vs greedy':>10} "
          f"{'evals':>10} {'peak_stored':>12}")
    for r in sorted(rows, key=lambda r: r.epsilon or 0.0):
        if r.algorithm != "streaming":
            continue
        rel = r.value / baseline if baseline else float("nan")
        print(f"{r.epsilon:>8.2f} {r.value:>12.6f} {rel:>10.3f} "
              f"{r.evals:>10d} {r.peak_stored:>12d}")

    if args.output:
        emit_report(rows, args.output, "csv")
        emit_report(rows, args.output, "json")
        print(f"report written to {args.output}.csv / .json")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
