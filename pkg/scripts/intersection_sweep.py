"""Sweep the random-intersection frequency over (n, r) and write a CSV."""

import argparse
import csv
import math
import sys

from tdoped.learner import exact_intersection_probability, intersection_bound, intersection_stats
from tdoped.streams import rng_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "r", "trials", "empirical_p", "sigma", "bound", "exact"])
    for n in range(2, args.nmax + 1):
        for r in range(1, n):
            p = intersection_stats(n, r, args.trials, rng_stream(args.seed, "sweep", 64 * n + r))
            exact = f"{exact_intersection_probability(n, r):.6f}" if n <= 3 else ""
            w.writerow([n, r, args.trials, f"{p:.6f}", f"{math.sqrt(p * (1 - p) / args.trials):.6f}",
                        f"{intersection_bound(n, r):.6f}", exact])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
