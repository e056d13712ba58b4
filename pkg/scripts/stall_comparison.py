#!/usr/bin/env python3
"""Decaying-step vs fixed-step iteration against a translating feasible region.

The projection step of the ap variant shrinks as the iterate closes in on
the region, so once the per-iteration displacement exceeds the membership
precision the chase never ends.  The modap variant moves a fixed distance
per iteration and punches through.  This script runs both on the same
moving model problem and prints the outcome per displacement rate.
"""

import argparse

from modap import (
    DynamicsSpec,
    DynamicSystemSource,
    ModelProblemSpec,
    SolverConfig,
    generate_model_problem,
    solve,
)


def run(variant, rate, n, quantum, budget, step_length):
    source = DynamicSystemSource(
        generate_model_problem(ModelProblemSpec(n=n)),
        DynamicsSpec(mode="translation", rate=rate, seconds_per_iteration=quantum),
    )
    config = SolverConfig(
        variant=variant,
        step_length=step_length,
        eps=1e-7,
        max_iterations=budget,
    )
    return solve(source, config)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--quantum", type=float, default=0.1,
                        help="virtual seconds per iteration")
    parser.add_argument("--budget", type=int, default=20_000)
    parser.add_argument("--lambda", type=float, default=1.0, dest="step_length")
    parser.add_argument("--rates", type=float, nargs="+",
                        default=[0.1, 0.5, 1.0, 2.0, 4.0])
    args = parser.parse_args()

    print(f"model problem n={args.n}, quantum={args.quantum}s, "
          f"budget={args.budget}, lambda={args.step_length}")
    print(f"{'rate':>8}  {'ap':>24}  {'modap':>24}")
    for rate in args.rates:
        cells = []
        for variant in ("ap", "modap"):
            out = run(variant, rate, args.n, args.quantum, args.budget,
                      args.step_length)
            cells.append(f"{out.status.value} ({out.iterations} it)")
        print(f"{rate:>8.3g}  {cells[0]:>24}  {cells[1]:>24}")


if __name__ == "__main__":
    main()
