"""Equivariance residual sweep over seeds, written as CSV.

    python3 scripts/siegel_sweep.py --genus 3 --seeds 100 --out sweep.csv
"""
import argparse
import csv
import sys

from prymcheck.relations import standard_loops
from prymcheck.siegel import CONVENTIONS, PrymSetup, equivariance_sweep


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--genus", type=int, nargs="+", default=[3, 4])
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--word-length", type=int, default=6)
    parser.add_argument("--convention", choices=CONVENTIONS, default="variant")
    parser.add_argument("--out", help="CSV file (default stdout)")
    args = parser.parse_args(argv)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["seed", "genus", "word-length", "residual"])
    for g in args.genus:
        setup = PrymSetup.build(g, loops=standard_loops(g))
        for row in equivariance_sweep(setup, range(args.seeds), args.word_length, args.convention):
            writer.writerow([row.seed, row.genus, row.word_length, f"{row.residual:.3e}"])
    if args.out:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
