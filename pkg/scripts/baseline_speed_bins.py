#!/usr/bin/env python3
"""SR/AEL of the pursuit baseline across all speed bins.

    python scripts/baseline_speed_bins.py --episodes 50 --out runs/baseline.csv
"""
import argparse

from movegrasp.evaluation import EvalSpec, evaluate, export_results
from movegrasp.patterns import TEST_KINDS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--patterns", default=",".join(TEST_KINDS))
    ap.add_argument("--episodes", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--out", default="runs/baseline_speed_bins.csv")
    args = ap.parse_args()
    spec = EvalSpec(patterns=tuple(args.patterns.split(",")), episodes_per_cell=args.episodes,
                    seeds=tuple(range(args.seeds)))
    table = evaluate(spec, progress=lambda c: print(f"  {c.pattern:>16} ({c.bin_lo:.1f}, {c.bin_hi:.1f}] "
                                                       f"seed {c.seed} {c.object:<15} SR {c.sr:.2f}", flush=True))
    export_results(table, args.out)
    print("\npattern           bin         SR     AEL")
    for row in table.aggregate():
        print(f"{row['pattern']:<16}  ({row['bin_lo']:.1f}, {row['bin_hi']:.1f}]  {row['sr']:.3f}  {row['ael']:6.1f}")


if __name__ == "__main__":
    main()
