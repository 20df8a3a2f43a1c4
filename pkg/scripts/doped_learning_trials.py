"""Seeded doped-state learning trials; prints one CSV row per trial."""

import argparse
import csv
import sys

from tdoped import denseoracle as do
from tdoped.circuit import layered_doped_circuit
from tdoped.hybridsim import prepare
from tdoped.learner import LearnerConfig, learn_doped_state
from tdoped.sources import HybridSource
from tdoped.streams import rng_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--profile", choices=("paper", "desk"), default="desk")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["trial", "rank", "removed", "aborted_reps", "copies", "budget", "trace_distance"])
    wins = 0
    for i in range(args.trials):
        c = layered_doped_circuit(args.n, args.t, 10 * args.n, rng_stream(args.seed, "trial-circuit", i))
        src = HybridSource(prepare(c))
        cfg = LearnerConfig.from_profile(args.profile, epsilon=args.epsilon, t_hint=args.t,
                                         master_seed=args.seed + i)
        L = learn_doped_state(src, cfg)
        d = do.trace_distance_pure(do.simulate_circuit(c), do.DenseState(args.n, L.vector()))
        wins += d <= args.epsilon
        g = L.diagnostics
        w.writerow([i, g["rank"], g["removed"], g["aborted_reps"], g["copies_consumed"],
                    g["copy_budget"], f"{d:.3e}"])
    print(f"# success rate {wins / args.trials:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
