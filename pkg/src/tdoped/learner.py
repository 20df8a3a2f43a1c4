"""Learning stabilizer groups and t-doped states from single-copy measurements.

Pipeline:

1. repeat: draw a random maximal group ``T``, measure fresh copies in its basis
   and keep the elements of ``T`` whose outcome never varies;
2. merge everything found into a candidate group ``R``;
3. verify ``R`` on many more copies and keep the subgroup that always reads 0;
4. map the code space to ``|0^r> (x) phi`` with an encoding Clifford and
   reconstruct ``phi`` by Pauli tomography.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import gf2kit
from .errors import CapacityError
from .gf2kit import BitMatrix
from .hybridsim import embed_and_apply
from .pauli import (
    CliffordTableau,
    PauliOp,
    StabilizerGroup,
    combine,
    encoding_circuit,
    pauli_commutes,
    random_stabilizer_group,
)
from .sources import StateSource
from .streams import rng_stream

PROFILES = {
    "paper": {"c1": 10.0, "c2": 300.0, "c3": 1.0},
    "desk": {"c1": 4.0, "c2": 40.0, "c3": 1.0},
}

# Residual tomography is exponential in the residual size; keep it small.
TOMOGRAPHY_CAP = 8


@dataclass
class LearnerConfig:
    """Copy budgets and seeds.  ``None`` counts fall back to the formulas below."""

    epsilon: float = 0.1
    t_hint: int = 0
    profile: str = "paper"
    c1: float = 10.0
    c2: float = 300.0
    c3: float = 1.0
    c_tom: float = 4.0
    reps: int | None = None
    copies_per_rep: int | None = None
    verify_copies: int | None = None
    tomography_copies: int | None = None
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.t_hint < 0:
            raise ValueError("t_hint must be non-negative")
        for name in ("reps", "verify_copies", "tomography_copies"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.copies_per_rep is not None and self.copies_per_rep < 2:
            raise ValueError("copies_per_rep must be at least 2")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_profile(cls, profile: str, **overrides) -> LearnerConfig:
        if profile not in PROFILES:
            raise ValueError(f"unknown profile {profile!r}")
        return cls(profile=profile, **{**PROFILES[profile], **overrides})

    def n_reps(self, n: int) -> int:
        if self.reps is not None:
            return self.reps
        return max(1, math.ceil(self.c1 * n * 2**self.t_hint))

    def n_copies_per_rep(self, n: int) -> int:
        if self.copies_per_rep is not None:
            return self.copies_per_rep
        return max(2, math.ceil(self.c2 * n))

    def n_verify_copies(self, n: int, epsilon: float | None = None) -> int:
        if self.verify_copies is not None:
            return self.verify_copies
        eps = self.epsilon if epsilon is None else epsilon
        return max(1, math.ceil(self.c3 * (n * n + 2 * n) / eps**2))

    def n_tomography_copies(self, k: int) -> int:
        if self.tomography_copies is not None:
            return self.tomography_copies
        if k == 0:
            return 0
        return max(4**k - 1, math.ceil(self.c_tom * 8**k / self.epsilon**2))

    def inner_epsilon(self) -> float:
        """Verification accuracy used inside the doped-state pipeline."""
        return min(self.epsilon, self.epsilon**4 / (16 * 4**self.t_hint))

    def constants(self) -> dict:
        return {k: v for k, v in asdict(self).items() if k != "workers"}


# --- step 1: one repetition -----------------------------------------------------


def harvest_intersection(B, T: StabilizerGroup) -> list[PauliOp]:
    """Signed generators of ``T`` elements with constant outcome over ``B``.

    ``B`` holds one row of outcome bits per copy, one column per generator of
    ``T``.  ``B a = 0`` gives ``+g(a)``; ``B a = 1`` gives ``-g(a)``.
    """
    if not isinstance(B, BitMatrix):
        B = BitMatrix.from_array(np.asarray(B, dtype=np.uint8))
    m, n = B.shape
    if m * n == 0:
        raise ValueError("empty outcome matrix")
    if n != T.rank:
        raise ValueError("outcome columns must match the generators of T")
    if m < 2:
        raise ValueError("need at least two copies")
    kernel, one = gf2kit.constant_row_solutions(B)
    coeffs = [v.to_bits() for v in kernel]
    if one is not None:
        coeffs.append(one.to_bits())
    if not coeffs:
        return []
    xs, zs, ps = combine(*T.arrays(), np.stack(coeffs))
    out = [PauliOp(xs[i], zs[i], int(ps[i])) for i in range(len(coeffs))]
    if one is not None:
        out[-1] = -out[-1]
    return out


def _run_rep(source: StateSource, n: int, copies: int, seed: int, index: int) -> list[PauliOp]:
    rng = rng_stream(seed, "rep", index)
    T = random_stabilizer_group(n, rng)
    B = source.sample(T.generators, copies, rng)
    return harvest_intersection(B, T)


def _span_sign(R: StabilizerGroup, g: PauliOp) -> int | None:
    """Sign (+1/-1) of the element of ``R`` with the unsigned part of ``g``."""
    if R.rank == 0:
        return None
    M = BitMatrix.from_array(R.symplectic_matrix().T)
    a = gf2kit.solve(M, g.symplectic())
    if a is None:
        return None
    h = R.element(a.to_bits())
    return 1 if h.phase == g.phase else -1


def _merge(R: StabilizerGroup, found: list[PauliOp]) -> tuple[StabilizerGroup, bool]:
    """Add a repetition's harvest to ``R``; all-or-nothing on any conflict."""
    for g in found:
        if any(not pauli_commutes(g, h) for h in R.generators):
            return R, False
    trial = R
    for g in found:
        sign = _span_sign(trial, g)
        if sign == -1:
            return R, False
        if sign is None:
            trial = StabilizerGroup(R.n, trial.generators + [g])
    return trial, True


def canonical_basis(R: StabilizerGroup) -> StabilizerGroup:
    """Row-reduced generating set (pivots on the lowest symplectic columns)."""
    if R.rank == 0:
        return StabilizerGroup(R.n, [])
    M = R.symplectic_matrix()
    r = R.rank
    aug = np.concatenate([M, np.eye(r, dtype=np.uint8)], axis=1)
    words = gf2kit.pack_bits(aug)
    pivots = gf2kit._rref_words(words, aug.shape[1], col_order=range(M.shape[1]))
    if len(pivots) != r:
        raise ValueError("generators are not independent")
    E = gf2kit.unpack_bits(words, aug.shape[1])[:, M.shape[1]:]
    xs, zs, ps = combine(*R.arrays(), E)
    return StabilizerGroup(R.n, [PauliOp(xs[i], zs[i], int(ps[i])) for i in range(r)])


def learn_stabilizer_group(
    source: StateSource, cfg: LearnerConfig, diagnostics: dict | None = None
) -> StabilizerGroup:
    """Candidate stabilizer group from ``cfg.reps`` random-basis repetitions."""
    n = source.n
    reps, copies = cfg.n_reps(n), cfg.n_copies_per_rep(n)

    def job(i):
        return _run_rep(source, n, copies, cfg.master_seed, i)

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            harvests = list(pool.map(job, range(reps)))
    else:
        harvests = [job(i) for i in range(reps)]
    R = StabilizerGroup(n, [])
    aborted = 0
    for found in harvests:
        R, ok = _merge(R, found)
        aborted += not ok
    if diagnostics is not None:
        diagnostics.update(
            reps=reps,
            copies_per_rep=copies,
            aborted_reps=aborted,
            candidate_rank=R.rank,
            learn_copies=reps * copies,
        )
    return canonical_basis(R)


# --- step 2: verification ---------------------------------------------------------


def verify_group(
    source: StateSource,
    candidate: StabilizerGroup,
    cfg: LearnerConfig,
    rng: np.random.Generator | None = None,
    copies: int | None = None,
    epsilon: float | None = None,
    diagnostics: dict | None = None,
) -> StabilizerGroup:
    """Subgroup of ``candidate`` whose outcomes were 0 on every verification copy.

    Elements that ever read 1 are eliminated by row reduction of the observed
    outcome patterns; the lowest-indexed offending generators are dropped.
    """
    n = source.n
    if copies is None:
        copies = cfg.n_verify_copies(n, epsilon)
    if rng is None:
        rng = rng_stream(cfg.master_seed, "verify")
    if candidate.rank == 0:
        if diagnostics is not None:
            diagnostics.update(verify_copies=0, removed=0)
        return StabilizerGroup(n, [])
    patterns, counts = source.counts(candidate.generators, copies, rng)
    seen = patterns[counts > 0]
    if seen.any():
        keep = gf2kit.nullspace(BitMatrix.from_array(seen))
        coeffs = [v.to_bits() for v in keep]
    else:
        coeffs = list(np.eye(candidate.rank, dtype=np.uint8))
    if coeffs:
        xs, zs, ps = combine(*candidate.arrays(), np.stack(coeffs))
        gens = [PauliOp(xs[i], zs[i], int(ps[i])) for i in range(len(coeffs))]
    else:
        gens = []
    if diagnostics is not None:
        diagnostics.update(verify_copies=copies, removed=candidate.rank - len(gens))
    return StabilizerGroup(n, gens)


# --- step 3: residual tomography ---------------------------------------------------


def residual_paulis(k: int) -> list[PauliOp]:
    """All ``4**k - 1`` non-identity Hermitian Paulis on ``k`` qubits."""
    return [PauliOp.from_string("".join(w)) for w in itertools.product("IXYZ", repeat=k)][1:]


def tomograph_residual(
    source: StateSource,
    V: CliffordTableau,
    r: int,
    copies: int,
    rng: np.random.Generator,
    cap: int = TOMOGRAPHY_CAP,
    diagnostics: dict | None = None,
) -> np.ndarray:
    """Estimate ``phi`` in ``V (|0^r> (x) phi)`` from single-copy Pauli data.

    Each copy is measured on the code generators ``V Z_j V^dag`` and on one
    logical Pauli ``V (I (x) P) V^dag``, cycling through all ``P``.  Copies
    whose code outcomes are not all 0 are discarded.
    """
    n = V.n
    k = n - r
    if k < 0:
        raise ValueError("rank exceeds the qubit count")
    if k == 0:
        return np.ones(1, dtype=complex)
    if k > cap:
        raise CapacityError(f"residual of {k} qubits exceeds the tomography cap {cap}")
    paulis = residual_paulis(k)
    if copies < len(paulis):
        raise ValueError(f"need at least {len(paulis)} copies, got {copies}")
    code = [V.z_image(j) for j in range(r)]
    base, extra = divmod(copies, len(paulis))
    est = np.zeros(len(paulis))
    kept_total = 0
    for i, P in enumerate(paulis):
        shots = base + (i < extra)
        full = PauliOp(np.concatenate([np.zeros(r, np.uint8), P.x]),
                       np.concatenate([np.zeros(r, np.uint8), P.z]), P.phase)
        patterns, counts = source.counts(code + [V.conjugate(full)], shots, rng)
        ok = ~patterns[:, :r].any(axis=1)
        kept = int(counts[ok].sum())
        kept_total += kept
        if kept:
            signs = 1 - 2 * patterns[ok, r].astype(np.int64)
            est[i] = float(signs @ counts[ok]) / kept
    rho = np.eye(2**k, dtype=complex)
    for e, P in zip(est, paulis):
        if e:
            rho += e * P.to_matrix()
    rho /= 2**k
    w, vecs = np.linalg.eigh(rho)
    phi = vecs[:, -1]
    # Fix the global phase for reproducible output.
    j = int(np.argmax(np.abs(phi)))
    phi = phi * (abs(phi[j]) / phi[j])
    if diagnostics is not None:
        diagnostics.update(tomography_copies=copies, tomography_kept=kept_total)
    return phi / np.linalg.norm(phi)


# --- full pipeline -----------------------------------------------------------------


@dataclass
class LearnedState:
    S: StabilizerGroup
    V: CliffordTableau
    phi_hat: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.S.n

    def vector(self) -> np.ndarray:
        """Dense ``V (|0^r> (x) phi_hat)``; exponential in ``n``."""
        return embed_and_apply(self.V, self.S.rank, self.phi_hat)

    def to_dict(self) -> dict:
        phi = np.empty(2 * self.phi_hat.size)
        phi[0::2] = self.phi_hat.real
        phi[1::2] = self.phi_hat.imag
        return {
            "n": self.n,
            "rank": self.S.rank,
            "generators": [str(g) for g in self.S.generators],
            "tableau": [str(g) for g in self.V.images()],
            "phi_hat": phi.tolist(),
            "diagnostics": self.diagnostics,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> LearnedState:
        n = d["n"]
        S = StabilizerGroup.from_strings(d["generators"], n) if d["generators"] else StabilizerGroup(n, [])
        V = CliffordTableau.from_images([PauliOp.from_string(s) for s in d["tableau"]])
        phi = np.asarray(d["phi_hat"], dtype=float)
        return cls(S, V, phi[0::2] + 1j * phi[1::2], dict(d.get("diagnostics", {})))


def copy_budget(cfg: LearnerConfig, n: int, k: int) -> int:
    """Copies the pipeline may use, from the configured formulas."""
    return (
        cfg.n_reps(n) * cfg.n_copies_per_rep(n)
        + cfg.n_verify_copies(n, cfg.inner_epsilon())
        + cfg.n_tomography_copies(k)
    )


def learn_doped_state(source: StateSource, cfg: LearnerConfig) -> LearnedState:
    start = time.perf_counter()
    before = source.copies_consumed
    diag: dict = {"master_seed": cfg.master_seed, "profile": cfg.profile}
    candidate = learn_stabilizer_group(source, cfg, diag)
    eps_v = cfg.inner_epsilon()
    diag["verify_epsilon"] = eps_v
    S = verify_group(source, candidate, cfg, rng_stream(cfg.master_seed, "verify"),
                     epsilon=eps_v, diagnostics=diag)
    S = canonical_basis(S)
    V = encoding_circuit(S)
    k = source.n - S.rank
    phi = tomograph_residual(source, V, S.rank, cfg.n_tomography_copies(k),
                             rng_stream(cfg.master_seed, "tomography"), diagnostics=diag)
    diag.setdefault("tomography_copies", 0)
    diag["rank"] = S.rank
    diag["copies_consumed"] = source.copies_consumed - before
    diag["copy_budget"] = copy_budget(cfg, source.n, k)
    diag["wall_time_s"] = time.perf_counter() - start
    return LearnedState(S, V, phi, diag)


# --- random intersection statistics -----------------------------------------------


def intersection_bound(n: int, r: int) -> float:
    """Lower bound ``1 / (2**(n - r + 1) + 1)`` on a nontrivial intersection."""
    return 1.0 / (2 ** (n - r + 1) + 1)


def _intersects(S_mat: np.ndarray, T_mat: np.ndarray) -> bool:
    both = np.concatenate([S_mat, T_mat])
    return gf2kit.rank(BitMatrix.from_array(both)) < S_mat.shape[0] + T_mat.shape[0]


def intersection_stats(n: int, r: int, trials: int, rng: np.random.Generator) -> float:
    """Fraction of random maximal groups meeting ``<Z_1..Z_r>`` beyond the identity."""
    if not 0 <= r < n:
        raise ValueError("need 0 <= r < n")
    if trials < 1:
        raise ValueError("trials must be positive")
    S_mat = StabilizerGroup.computational(n, r).symplectic_matrix()
    if r == 0:
        return 0.0
    hits = sum(_intersects(S_mat, random_stabilizer_group(n, rng).symplectic_matrix())
               for _ in range(trials))
    return hits / trials


def maximal_isotropic_subspaces(n: int) -> list[frozenset[int]]:
    """Every ``n``-dimensional isotropic subspace of GF(2)^(2n), by brute force.

    Vectors are ints with bit ``j`` for x_j and bit ``n + j`` for z_j.  Only
    practical for ``n <= 3``.
    """
    mask = (1 << n) - 1

    def sp(u, v):
        return (bin((u & mask) & (v >> n)).count("1") + bin((u >> n) & (v & mask)).count("1")) & 1

    found: set[frozenset[int]] = set()

    def grow(span: frozenset[int], start: int):
        if len(span) == 2**n:
            found.add(span)
            return
        for v in range(max(start, 1), 4**n):
            if v in span or any(sp(v, u) for u in span):
                continue
            new = frozenset(span | {u ^ v for u in span})
            if new not in seen:
                seen.add(new)
                grow(new, v + 1)

    seen: set[frozenset[int]] = set()
    grow(frozenset({0}), 1)
    return sorted(found, key=sorted)


def exact_intersection_probability(n: int, r: int) -> float:
    """Exact probability that a uniform maximal group meets ``<Z_1..Z_r>`` nontrivially."""
    ref = {sum(((a >> j) & 1) << (n + j) for j in range(r)) for a in range(2**r)}
    groups = maximal_isotropic_subspaces(n)
    hits = sum(len(g & ref) > 1 for g in groups)
    return hits / len(groups)
