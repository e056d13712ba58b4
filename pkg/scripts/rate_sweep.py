#!/usr/bin/env python3
"""Displacement-rate sweep: how fast can the region move before the solver
loses it, and how does the tolerated rate grow with the step length?

Writes one metrics CSV per (lambda, rate) pair under --out-dir and prints
the max tolerated rate per lambda.
"""

import argparse
from pathlib import Path

from modap import SolveStatus
from modap.harness import build_experiment_config, run_rate_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--quantum", type=float, default=0.01)
    parser.add_argument("--budget", type=int, default=5000)
    parser.add_argument("--lambdas", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--rates", type=float, nargs="+",
                        default=[1.0, 4.0, 16.0, 64.0, 256.0])
    parser.add_argument("--out-dir", default="sweep_out")
    args = parser.parse_args()

    for lam in args.lambdas:
        config = build_experiment_config(
            {
                "problem.n": str(args.n),
                "solver.variant": "modap",
                "solver.lambda": str(lam),
                "solver.max_iterations": str(args.budget),
                "dynamics.seconds_per_iteration": str(args.quantum),
            }
        )
        out_dir = Path(args.out_dir) / f"lambda_{lam}"
        results = run_rate_sweep(config, args.rates, out_dir)
        tolerated = [r for r, o in results if o.status is SolveStatus.CONVERGED]
        best = max(tolerated) if tolerated else float("nan")
        detail = ", ".join(
            f"{r:g}:{o.status.value}" for r, o in results
        )
        print(f"lambda={lam:g}  max tolerated rate={best:g}  [{detail}]")


if __name__ == "__main__":
    main()
