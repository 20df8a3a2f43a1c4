"""Command-line front end.

Every report embeds the run spec, the constants used, the random stream labels
and ``copies_consumed``.  Fields named ``wall_time*`` are the only
non-deterministic output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import denseoracle
from .circuit import Circuit, layered_doped_circuit, random_doped_circuit
from .errors import CapacityError
from .hybridsim import DEFAULT_DENSE_CAP, prepare
from .learner import (
    LearnedState,
    LearnerConfig,
    intersection_bound,
    intersection_stats,
    learn_doped_state,
    learn_stabilizer_group,
    verify_group,
)
from .pauli import PauliError
from .sources import HybridSource
from .streams import rng_stream

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY = 0, 2, 3
MODES = ("gen-circuit", "simulate", "learn", "lemma6", "bench", "verify")


@dataclass
class ExperimentSpec:
    mode: str
    n: int | None = None
    t: int = 0
    r: int | None = None
    depth: int | None = None
    epsilon: float = 0.1
    profile: str = "desk"
    trials: int = 1
    master_seed: int = 0
    circuit_path: str | None = None
    learned_path: str | None = None
    output_path: str | None = None
    dense_cap: int = denseoracle.DEFAULT_CAP
    ns: tuple[int, ...] = (16, 32, 64, 128)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be positive")
        if self.t < 0:
            raise ValueError("t must be non-negative")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.profile not in ("paper", "desk"):
            raise ValueError("profile must be 'paper' or 'desk'")
        needs_n = {"gen-circuit", "lemma6"} | ({"learn"} if self.circuit_path is None else set())
        if self.mode in needs_n and self.n is None:
            raise ValueError(f"{self.mode} needs --n")
        if self.mode in ("simulate", "verify") and self.circuit_path is None:
            raise ValueError(f"{self.mode} needs --circuit")
        if self.mode == "verify" and self.learned_path is None:
            raise ValueError("verify needs --learned")
        if self.depth is not None and self.depth < self.t:
            raise ValueError("depth must be at least t")

    def default_depth(self, n: int) -> int:
        return self.depth if self.depth is not None else max(self.t, 10 * n)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _config(spec: ExperimentSpec, t_hint: int, seed: int) -> LearnerConfig:
    return LearnerConfig.from_profile(spec.profile, epsilon=spec.epsilon, t_hint=t_hint, master_seed=seed)


# --- subcommands ---------------------------------------------------------------


def gen_circuit(n: int, t: int, depth: int, seed: int) -> Circuit:
    return random_doped_circuit(n, t, depth, rng_stream(seed, "gen-circuit"))


def run_gen_circuit(spec: ExperimentSpec) -> int:
    c = gen_circuit(spec.n, spec.t, spec.default_depth(spec.n), spec.master_seed)
    header = f"# n={spec.n} t={spec.t} depth={spec.default_depth(spec.n)} seed={spec.master_seed}\n"
    _emit(header + c.to_text(), spec.output_path)
    return EXIT_OK


def run_simulate(spec: ExperimentSpec) -> dict:
    c = Circuit.load(spec.circuit_path)
    start = time.perf_counter()
    state = prepare(c, dense_cap=max(spec.dense_cap, DEFAULT_DENSE_CAP))
    V, r, phi = state.residual_extract()
    report = {
        "spec": asdict(spec),
        "n": c.n,
        "doped_count": c.doped_count,
        "frozen": r,
        "dense": c.n - r,
        "tableau": [str(g) for g in V.images()],
        "copies_consumed": 0,
    }
    if c.n <= spec.dense_cap:
        truth = denseoracle.simulate_circuit(c, cap=spec.dense_cap)
        report["oracle_overlap"] = float(abs(np.vdot(truth.amplitudes, state.to_dense())))
    else:
        report["oracle_overlap"] = "unverifiable at this n"
    report["wall_time_s"] = time.perf_counter() - start
    return report


def _trial_circuit(spec: ExperimentSpec, i: int) -> Circuit:
    if spec.circuit_path is not None:
        return Circuit.load(spec.circuit_path)
    rng = rng_stream(spec.master_seed, "trial-circuit", i)
    return layered_doped_circuit(spec.n, spec.t, spec.default_depth(spec.n), rng)


def learn_trial(spec: ExperimentSpec, i: int) -> dict:
    c = _trial_circuit(spec, i)
    t_hint = max(spec.t, c.doped_count) if spec.circuit_path is not None else spec.t
    cfg = _config(spec, t_hint, (spec.master_seed + i) % 2**64)
    source = HybridSource(prepare(c))
    learned = learn_doped_state(source, cfg)
    out = {"trial": i, "learned": learned.to_dict(), "copies_consumed": source.copies_consumed}
    if c.n <= spec.dense_cap:
        truth = denseoracle.simulate_circuit(c, cap=spec.dense_cap)
        guess = denseoracle.DenseState(c.n, learned.vector())
        out["trace_distance"] = denseoracle.trace_distance_pure(truth, guess)
    else:
        out["trace_distance"] = "unverifiable at this n"
    return out


def run_learn(spec: ExperimentSpec) -> dict:
    trials = [learn_trial(spec, i) for i in range(spec.trials)]
    n = trials[0]["learned"]["n"]
    dists = [tr["trace_distance"] for tr in trials if isinstance(tr["trace_distance"], float)]
    return {
        "spec": asdict(spec),
        "constants": _config(spec, spec.t, spec.master_seed).constants(),
        "streams": ["trial-circuit/<trial>", "rep/<index>", "verify", "tomography"],
        "n": n,
        "copies_consumed": sum(tr["copies_consumed"] for tr in trials),
        "success_rate": (sum(d <= spec.epsilon for d in dists) / len(dists)) if dists else None,
        "trials": trials,
    }


def run_intersection(spec: ExperimentSpec) -> str:
    r = spec.r if spec.r is not None else spec.n - spec.t
    if not 0 < r < spec.n:
        raise ValueError("need 0 < r < n")
    p = intersection_stats(spec.n, r, spec.trials, rng_stream(spec.master_seed, "intersection"))
    sigma = math.sqrt(max(p * (1 - p), 1e-12) / spec.trials)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r", "trials", "empirical_p", "bound", "sigma", "seed", "copies_consumed"])
    w.writerow([spec.n, r, spec.trials, f"{p:.6f}", f"{intersection_bound(spec.n, r):.6f}",
                f"{sigma:.6f}", spec.master_seed, 0])
    return buf.getvalue()


def time_learning(n: int, t: int, profile: str, seed: int) -> tuple[float, int]:
    """Wall time of group learning on a ``t``-doped source; returns (seconds, copies)."""
    rng = rng_stream(seed, "bench-circuit", n * 64 + t)
    source = HybridSource(prepare(layered_doped_circuit(n, t, 4 * n, rng)))
    cfg = LearnerConfig.from_profile(profile, t_hint=t, master_seed=seed)
    start = time.perf_counter()
    learn_stabilizer_group(source, cfg)
    return time.perf_counter() - start, source.copies_consumed


def fit_slope(ns, times) -> float:
    return float(np.polyfit(np.log(ns), np.log(times), 1)[0])


def run_bench(spec: ExperimentSpec) -> dict:
    rows = []
    for n in spec.ns:
        secs, copies = time_learning(n, spec.t, spec.profile, spec.master_seed)
        rows.append({"n": n, "t": spec.t, "wall_time_s": secs, "copies_consumed": copies})
    report = {
        "spec": asdict(spec),
        "constants": LearnerConfig.from_profile(spec.profile, t_hint=spec.t).constants(),
        "rows": rows,
        "copies_consumed": sum(r["copies_consumed"] for r in rows),
    }
    if len(rows) >= 2:
        report["wall_time_slope"] = fit_slope([r["n"] for r in rows], [r["wall_time_s"] for r in rows])
    return report


def run_verify(spec: ExperimentSpec) -> dict:
    """Re-check a learned-state report against its circuit."""
    c = Circuit.load(spec.circuit_path)
    with open(spec.learned_path) as fh:
        doc = json.load(fh)
    if "trials" in doc:
        doc = doc["trials"][0]["learned"]
    learned = LearnedState.from_dict(doc)
    if learned.n != c.n:
        raise ValueError("learned state and circuit have different qubit counts")
    learned.S.check()
    cfg = _config(spec, spec.t, spec.master_seed)
    source = HybridSource(prepare(c))
    diag: dict = {}
    kept = verify_group(source, learned.S, cfg, rng_stream(spec.master_seed, "verify"), diagnostics=diag)
    report = {
        "spec": asdict(spec),
        "constants": cfg.constants(),
        "rank": learned.S.rank,
        "surviving_rank": kept.rank,
        "removed": diag["removed"],
        "copies_consumed": source.copies_consumed,
    }
    if c.n <= spec.dense_cap:
        truth = denseoracle.simulate_circuit(c, cap=spec.dense_cap)
        report["trace_distance"] = denseoracle.trace_distance_pure(
            truth, denseoracle.DenseState(c.n, learned.vector()))
        report["distance_to_code"] = denseoracle.distance_to_code(truth, learned.S, cap=spec.dense_cap)
    else:
        report["trace_distance"] = "unverifiable at this n"
    return report


# --- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdoped", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        s = sub.add_parser(mode)
        s.add_argument("--n", type=int)
        s.add_argument("--t", type=int, default=0)
        s.add_argument("--r", type=int, help="reference rank for the intersection sweep (default n - t)")
        s.add_argument("--depth", type=int)
        s.add_argument("--epsilon", type=float, default=0.1)
        s.add_argument("--trials", type=int, default=2000 if mode == "lemma6" else 1)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--profile", choices=("paper", "desk"), default="desk")
        s.add_argument("--circuit")
        s.add_argument("--learned", help="learned-state JSON for verify")
        s.add_argument("--out")
        s.add_argument("--dense-cap", type=int, default=denseoracle.DEFAULT_CAP)
        s.add_argument("--ns", type=lambda v: tuple(int(x) for x in v.split(",")),
                       default=(16, 32, 64, 128), help="comma-separated sizes for bench")
    return p


def spec_from_args(args) -> ExperimentSpec:
    return ExperimentSpec(
        mode=args.mode, n=args.n, t=args.t, r=args.r, depth=args.depth, epsilon=args.epsilon,
        profile=args.profile, trials=args.trials, master_seed=args.seed,
        circuit_path=args.circuit, learned_path=args.learned, output_path=args.out,
        dense_cap=args.dense_cap, ns=args.ns,
    )


def run(spec: ExperimentSpec) -> int:
    spec.validate()
    if spec.mode == "gen-circuit":
        return run_gen_circuit(spec)
    if spec.mode == "lemma6":
        _emit(run_intersection(spec), spec.output_path)
        return EXIT_OK
    handler = {"simulate": run_simulate, "learn": run_learn, "bench": run_bench, "verify": run_verify}
    _emit(_dump(handler[spec.mode](spec)), spec.output_path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(spec_from_args(args))
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, PauliError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
