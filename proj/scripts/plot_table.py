#!/usr/bin/env python3
"""Minimal plotting template for roughkit CSV tables.

Examples:
    python3 scripts/plot_table.py out/rs/summary.csv --x level --y median --logy
    python3 scripts/plot_table.py out/wz/summary.csv --x level --y median_holder --logy
    python3 scripts/plot_table.py out/ld/partial_sums.csv --x n --y partial_sum --logx
"""
import argparse
import csv

import matplotlib.pyplot as plt


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("table")
    ap.add_argument("--x", required=True)
    ap.add_argument("--y", required=True, nargs="+")
    ap.add_argument("--logx", action="store_true")
    ap.add_argument("--logy", action="store_true")
    ap.add_argument("--out", help="write a PNG instead of showing a window")
    args = ap.parse_args()

    with open(args.table, newline="") as fh:
        rows = list(csv.DictReader(fh))
    xs = [float(r[args.x]) for r in rows]
    for column in args.y:
        plt.plot(xs, [float(r[column]) for r in rows], marker="o", label=column)
    if args.logx:
        plt.xscale("log")
    if args.logy:
        plt.yscale("log")
    plt.xlabel(args.x)
    plt.legend()
    plt.grid(True, alpha=0.3)
    if args.out:
        plt.savefig(args.out, dpi=150, bbox_inches="tight")
    else:
        plt.show()


if __name__ == "__main__":
    main()
