#!/usr/bin/env python3
"""Desk-scale reruns of the reference tables and figure data.

Tables 1-4 sweep rank measurements over (L, q) grids; table 5 is the
analytic critical-length grid. The full runs use 200 trials per cell;
a handful is enough to see the ranks, which are the same on every trial.
Results land as table{N}.txt / table{N}.csv plus the underlying
trials.csv and aggregate.json, all byte-reproducible for a fixed seed.
"""

import argparse
from pathlib import Path

from chaintomo.harness import reproduce_figure, reproduce_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--table", type=int, default=1, choices=(1, 2, 3, 4, 5),
                    help="which table to rerun (default 1)")
    ap.add_argument("--trials", type=int, default=3,
                    help="trials per cell for tables 1-4 (default 3)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="demo_results")
    ap.add_argument("--figure", type=int, default=None, choices=(1, 2),
                    help="also rerun one figure's data series (slower)")
    args = ap.parse_args()

    text, _ = reproduce_table(args.table, trials=args.trials, seed=args.seed,
                              out_dir=args.out_dir)
    print(text)
    out = Path(args.out_dir)
    print("wrote:")
    for p in sorted(out.rglob("*")):
        if p.is_file():
            print(f"  {p}")

    if args.figure is not None:
        paths = reproduce_figure(args.figure, trials=args.trials, seed=args.seed,
                                 out_dir=out / f"figure{args.figure}")
        print("figure series:")
        for p in paths:
            print(f"  {p}")


if __name__ == "__main__":
    main()
