#!/usr/bin/env python3
"""Small desk-scale benchmark: run hms / mcs-hms / pso on the classic10
suite and print the per-function mean errors and the resulting rank
summary. Scale up --runs / --nfe-max for a serious comparison.
"""

import argparse

from hmsopt.harness import ExperimentConfig, run_experiment, summary_to_table
from hmsopt.stats import rank_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=10, choices=[2, 10, 30, 50, 100])
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--nfe-max", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="desk_results")
    parser.add_argument("--parallelism", type=int, default=1)
    args = parser.parse_args()

    config = ExperimentConfig(
        suite="classic10",
        dims=(args.dim,),
        algorithms=("hms", "mcs-hms", "pso"),
        runs=args.runs,
        nfe_max=args.nfe_max,
        master_seed=args.seed,
        out_dir=args.out,
        parallelism=args.parallelism,
    )
    raw_path, summary_path = run_experiment(config)
    print(f"raw results: {raw_path}")
    print(f"summary:     {summary_path}\n")

    table = summary_to_table(summary_path)
    header = f"{'function':24s}" + "".join(f"{a:>14s}" for a in table.algorithms)
    print(header)
    for i, function in enumerate(table.functions):
        cells = "".join(f"{v:14.4e}" for v in table.values[i])
        print(f"{function:24s}{cells}")

    summary = rank_summary(table)
    print(f"\n{'algorithm':12s} {'avg rank':>9s} {'best':>5s} {'worst':>6s} {'std':>6s}")
    for algo in table.algorithms:
        avg, best, worst, std = summary.row(algo)
        print(f"{algo:12s} {avg:9.2f} {best:5.0f} {worst:6.0f} {std:6.2f}")


if __name__ == "__main__":
    main()
