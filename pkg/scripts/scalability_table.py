#!/usr/bin/env python3
"""Predicted scalability bound vs problem dimension, for both update regimes.

Single-value updates let the bound grow like sqrt(n); full-data updates pin
it to a constant because shipping the update dominates the superstep.  The
machine constants are assumptions (defaults in modap.cost_model), not
measurements.
"""

import argparse

from modap.cost_model import CostParams, sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-values", type=int, nargs="+",
                        default=[100, 1000, 10_000, 100_000, 1_000_000])
    parser.add_argument("--tau-op", type=float, default=None)
    parser.add_argument("--tau-tr", type=float, default=None)
    parser.add_argument("--latency", type=float, default=None)
    args = parser.parse_args()

    overrides = {}
    if args.tau_op is not None:
        overrides["tau_op"] = args.tau_op
    if args.tau_tr is not None:
        overrides["tau_tr"] = args.tau_tr
    if args.latency is not None:
        overrides["latency"] = args.latency
    base = CostParams(n=1, m=1, **overrides)

    print(f"machine constants: tau_op={base.tau_op} tau_tr={base.tau_tr} "
          f"latency={base.latency} (assumed)")
    print(f"{'n':>10} {'m':>10} {'k_max (single)':>16} {'k_max (full)':>14}")
    for n, m, single, full in sweep(base, args.n_values):
        print(f"{n:>10} {m:>10} {single:>16.2f} {full:>14.3f}")


if __name__ == "__main__":
    main()
