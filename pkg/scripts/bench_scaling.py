"""Time group learning against n and t; reports the fitted log-log slope."""

import argparse

from tdoped.cli import fit_slope, time_learning


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="16,32,64,128")
    ap.add_argument("--t", type=int, default=0)
    ap.add_argument("--profile", choices=("paper", "desk"), default="desk")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ns = [int(v) for v in args.ns.split(",")]
    times = []
    for n in ns:
        secs, copies = time_learning(n, args.t, args.profile, args.seed)
        times.append(secs)
        print(f"n={n:4d} t={args.t} time={secs:8.2f}s copies={copies}")
    if len(ns) > 1:
        print(f"slope {fit_slope(ns, times):.2f}")
    n = ns[len(ns) // 2]
    t0 = time_learning(n, args.t, args.profile, args.seed)[0]
    t1 = time_learning(n, args.t + 1, args.profile, args.seed)[0]
    print(f"n={n}: t {args.t}->{args.t + 1} time ratio {t1 / t0:.2f}")


if __name__ == "__main__":
    main()
