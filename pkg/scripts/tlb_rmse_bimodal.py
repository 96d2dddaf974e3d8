"""Benchmark distance lower-bound tightness and reconstruction error.

Runs every encoding method over a grid of subsequence lengths, byte budgets
and alphabet sizes on a synthetic bimodal corpus, then prints one pivoted
table per metric and alphabet size.  Larger TLB is better (tighter lower
bound); smaller RMSE is better.

    python scripts/tlb_rmse_bimodal.py --trials 50
    python scripts/tlb_rmse_bimodal.py --lengths 480 --bytes 16 --kappas 16 --csv out.csv
"""

import argparse
import time

from saxkit.codec import EncodingMethod
from saxkit.harness import (
    ExperimentGrid,
    generate_synthetic,
    pivot_records,
    run_tlb_rmse_experiment,
    write_records_csv,
)


def print_pivot(rows: list[dict], title: str) -> None:
    columns = list(rows[0])
    widths = [max(len(c), 10) for c in columns]
    print(f"\n{title}")
    print("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    for row in rows:
        cells = [
            f"{row[c]:.4f}" if isinstance(row[c], float) else str(row[c])
            for c in columns
        ]
        print("  ".join(cell.rjust(w) for cell, w in zip(cells, widths)))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus-length", type=int, default=100_000)
    parser.add_argument("--lengths", type=int, nargs="+", default=[480, 960])
    parser.add_argument("--bytes", type=int, nargs="+", default=[8, 16], dest="budgets")
    parser.add_argument("--kappas", type=int, nargs="+", default=[16, 256])
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--weight", type=float, default=0.5, help="mass of the lower mode")
    parser.add_argument("--csv", help="also write the long-format records here")
    args = parser.parse_args()

    corpus = generate_synthetic(
        "bimodal_mixture", args.corpus_length, seed=args.seed, weight=args.weight
    )
    grid = ExperimentGrid(
        lengths=tuple(args.lengths),
        byte_budgets=tuple(args.budgets),
        kappas=tuple(args.kappas),
        trials=args.trials,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    records = run_tlb_rmse_experiment(corpus, grid, methods=tuple(EncodingMethod))
    elapsed = time.perf_counter() - t0
    print(f"{len(records)} records from {args.trials} trials per cell in {elapsed:.1f}s")

    if args.csv:
        write_records_csv(args.csv, records)
        print(f"wrote {args.csv}")

    for kappa in grid.kappas:
        for metric, label in (("tlb_mean", "mean TLB"), ("rmse_mean", "mean RMSE")):
            print_pivot(
                pivot_records(records, metric, kappa),
                f"{label}, alphabet {kappa} (columns: method x byte budget)",
            )


if __name__ == "__main__":
    main()
