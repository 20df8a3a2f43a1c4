"""Hybrid tableau / dense simulation of t-doped stabilizer states.

The state is ``V (|0>_F (x) phi_D)``: a Clifford tableau ``V`` on ``n``
qubits, a set ``F`` of frozen qubits pinned to ``|0>``, and an explicit vector
``phi`` on the remaining dense qubits.  Frozen and dense qubits are tracked by
an index map; nothing is physically reordered.  Global phase is not tracked.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import denseoracle, gf2kit
from .circuit import Circuit, clifford_quarter_turns
from .errors import CapacityError
from .pauli import (
    CliffordTableau,
    PauliOp,
    StabilizerGroup,
    conjugate_by_gate,
    inverse_gate,
    tableau_compose,
    tableau_to_gates,
)

DEFAULT_DENSE_CAP = 16
_QUARTER_GATES = {0: [], 1: [("S",)], 2: [("Z",)], 3: [("SDG",)]}


class HybridState:
    def __init__(self, n: int, dense_cap: int = DEFAULT_DENSE_CAP):
        self.n = n
        self.dense_cap = dense_cap
        self.V = CliffordTableau.identity(n)
        self.Vinv = CliffordTableau.identity(n)
        self.frozen = np.ones(n, dtype=bool)
        self.dense_qubits: list[int] = []
        self.phi = np.ones((), dtype=complex)

    @property
    def r(self) -> int:
        return self.n - len(self.dense_qubits)

    @property
    def k(self) -> int:
        return len(self.dense_qubits)

    def copy(self) -> HybridState:
        out = HybridState.__new__(HybridState)
        out.n = self.n
        out.dense_cap = self.dense_cap
        out.V = self.V.copy()
        out.Vinv = self.Vinv.copy()
        out.frozen = self.frozen.copy()
        out.dense_qubits = list(self.dense_qubits)
        out.phi = self.phi.copy()
        return out

    # --- tableau bookkeeping ----------------------------------------------

    def _left(self, gate: Sequence) -> None:
        """``V <- G V``."""
        self.V.apply_gate(gate)
        self.Vinv.prepend_gate(inverse_gate(gate))

    def _right(self, gate: Sequence) -> None:
        """``V <- V G``; used only with gates that fix the current ``|0>_F (x) phi``."""
        self.V.prepend_gate(gate)
        self.Vinv.apply_gate(inverse_gate(gate))

    def pull_back(self, g: PauliOp) -> PauliOp:
        """``V^dag g V``."""
        return self.Vinv.conjugate(g)

    def _frozen_x(self, P: PauliOp) -> np.ndarray:
        return np.flatnonzero(P.x.astype(bool) & self.frozen)

    def _sweep(self, P: PauliOp, j: int) -> int:
        """Map ``P`` to ``+-X_j`` by a Clifford ``W`` that fixes the state.

        ``W`` uses CNOT/CZ controlled on the frozen qubit ``j`` and ``S(j)``;
        ``V <- V W^dag`` keeps the represented state unchanged.  Returns the sign.
        """
        gates = [("CNOT", j, int(k)) for k in np.flatnonzero(P.x) if k != j]
        for g in gates:
            P = conjugate_by_gate(P, g)
        cz = [("CZ", j, int(k)) for k in np.flatnonzero(P.z) if k != j]
        for g in cz:
            P = conjugate_by_gate(P, g)
        gates += cz
        if P.z[j]:
            P = conjugate_by_gate(P, ("S", j))
            gates.append(("S", j))
        for g in gates:
            self._right(inverse_gate(g))
        assert P.x.sum() == 1 and not P.z.any() and P.phase in (0, 2)
        return 1 if P.phase == 0 else -1

    def _dense_apply(self, P: PauliOp, phi: np.ndarray | None = None) -> np.ndarray:
        """Action of a frozen-diagonal Pauli on ``phi`` (frozen Z factors give +1)."""
        v = self.phi if phi is None else phi
        for axis, q in enumerate(self.dense_qubits):
            if P.z[q]:
                shape = [1] * v.ndim
                shape[axis] = 2
                v = v * np.array([1, -1]).reshape(shape)
            if P.x[q]:
                v = np.flip(v, axis=axis)
        return (1j ** P.phase) * v

    # --- gates ---------------------------------------------------------------

    def apply_gate(self, gate: Sequence) -> None:
        name = gate[0]
        if name == "T":
            self.apply_pauli_rotation(gate[1], math.pi / 4)
        elif name == "RZ":
            self.apply_pauli_rotation(gate[1], gate[2])
        else:
            self._left(tuple(gate))

    def apply_pauli_rotation(self, q: int, theta: float) -> None:
        """Apply ``exp(-i theta Z_q / 2)``; multiples of pi/2 go to the tableau."""
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range for n={self.n}")
        turns = clifford_quarter_turns(theta)
        if turns is not None:
            for g in _QUARTER_GATES[turns]:
                self._left(g + (q,))
            return
        P = self.pull_back(PauliOp.single(self.n, q, "Z"))
        hits = self._frozen_x(P)
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        if hits.size:
            if self.k + 1 > self.dense_cap:
                raise CapacityError(f"dense register would exceed {self.dense_cap} qubits")
            j = int(hits[0])
            sign = self._sweep(P, j)
            self.phi = np.stack([c * self.phi, -1j * sign * s * self.phi], axis=-1)
            self.frozen[j] = False
            self.dense_qubits.append(j)
        else:
            self.phi = c * self.phi - 1j * s * self._dense_apply(P)

    def run(self, circuit: Circuit) -> HybridState:
        if circuit.n != self.n:
            raise ValueError("circuit size does not match the state")
        for g in circuit.gates:
            self.apply_gate(g)
        return self

    # --- measurement ---------------------------------------------------------

    def probability_zero(self, g: PauliOp) -> float:
        """Born probability of outcome 0 (eigenvalue +1) for ``g``."""
        if not g.is_hermitian():
            raise ValueError(f"{g} is not Hermitian")
        P = self.pull_back(g)
        if self._frozen_x(P).size:
            return 0.5
        ev = float(np.real(np.vdot(self.phi, self._dense_apply(P))))
        return min(1.0, max(0.0, 0.5 * (1 + ev)))

    def measure_pauli(self, g: PauliOp, rng: np.random.Generator) -> int:
        """Projectively measure ``g`` in place; returns ``b`` with eigenvalue ``(-1)**b``."""
        if not g.is_hermitian():
            raise ValueError(f"{g} is not Hermitian")
        if g.n != self.n:
            raise ValueError("Pauli size does not match the state")
        P = self.pull_back(g)
        hits = self._frozen_x(P)
        if hits.size:
            j = int(hits[0])
            sign = self._sweep(P, j)
            b = int(rng.integers(2))
            self._right(("H", j))
            if sign * (-1) ** b < 0:
                self._right(("X", j))
            return b
        Pphi = self._dense_apply(P)
        ev = float(np.real(np.vdot(self.phi, Pphi)))
        p0 = min(1.0, max(0.0, 0.5 * (1 + ev)))
        b = 0 if rng.random() < p0 else 1
        v = 0.5 * (self.phi + (-1) ** b * Pphi)
        self.phi = v / np.linalg.norm(v)
        return b

    def measure_group_basis(self, T: StabilizerGroup, rng: np.random.Generator) -> np.ndarray:
        return np.array([self.measure_pauli(g, rng) for g in T.generators], dtype=np.uint8)

    # --- exports -------------------------------------------------------------

    def residual_extract(self):
        """``(V', r, phi)`` with the state equal to ``V' (|0^r> (x) phi)``.

        ``V'`` folds the frozen/dense index map into the tableau, so frozen
        qubits come first and ``phi`` is a flat vector over the dense qubits
        in register order.
        """
        order = [q for q in range(self.n) if self.frozen[q]] + self.dense_qubits
        images = []
        for q in order:
            images.append(PauliOp.single(self.n, q, "X"))
        for q in order:
            images.append(PauliOp.single(self.n, q, "Z"))
        perm = CliffordTableau.from_images(images)
        return tableau_compose(self.V, perm), self.r, self.phi.reshape(-1).copy()

    def to_dense(self) -> np.ndarray:
        V, r, phi = self.residual_extract()
        return embed_and_apply(V, r, phi)

    def sampler(self, paulis: Sequence[PauliOp]) -> OutcomeSampler:
        return OutcomeSampler(self, paulis)


def embed_and_apply(V: CliffordTableau, r: int, phi: np.ndarray) -> np.ndarray:
    """Dense vector ``V (|0^r> (x) phi)`` via gate synthesis of ``V``."""
    n = V.n
    psi = np.zeros(2**n, dtype=complex)
    psi[: phi.size] = phi
    return denseoracle.apply_gates(psi, n, tableau_to_gates(V))


def prepare(circuit: Circuit, dense_cap: int = DEFAULT_DENSE_CAP) -> HybridState:
    return HybridState(circuit.n, dense_cap).run(circuit)


def measure_pauli(state: HybridState, g: PauliOp, rng: np.random.Generator):
    b = state.measure_pauli(g, rng)
    return b, state


def measure_group_basis(state: HybridState, T: StabilizerGroup, rng: np.random.Generator):
    bits = state.measure_group_basis(T, rng)
    return bits, state


def residual_extract(state: HybridState):
    return state.residual_extract()


_MULTINOMIAL_CELLS = 1 << 16
_MAX_INDIVIDUAL = 1 << 22


class OutcomeSampler:
    """Exact joint outcome law for sequentially measuring commuting Paulis.

    The pulled-back operators are re-expressed (by GF(2) row operations with
    exact phases) as

    * rows with an X/Y on a frozen qubit, in reduced echelon form on those
      columns: each anticommutes with one frozen ``Z`` and commutes with all
      other rows, so its outcome is an independent fair coin;
    * frozen-diagonal rows with independent dense parts, whose joint law is
      computed on ``phi``;
    * rows that are ``+-I`` on the dense register: deterministic.

    Outcomes of the original operators follow by inverting the row operations.
    """

    def __init__(self, state: HybridState, paulis: Sequence[PauliOp]):
        for g in paulis:
            if not g.is_hermitian():
                raise ValueError(f"{g} is not Hermitian")
            if g.n != state.n:
                raise ValueError("Pauli size does not match the state")
        L = len(paulis)
        self.L = L
        if L == 0:
            raise ValueError("nothing to measure")
        n = state.n
        x, z, p = state.Vinv.conjugate_rows(
            np.stack([g.x for g in paulis]),
            np.stack([g.z for g in paulis]),
            np.array([g.phase for g in paulis]),
        )
        x, z, p = x.copy(), z.copy(), p.copy()
        if gf2kit.matmul(np.concatenate([x, z], 1), np.concatenate([z, x], 1).T).any():
            raise ValueError("measured Paulis must commute")
        C = np.eye(L, dtype=np.uint8)
        used = np.zeros(L, dtype=bool)

        def eliminate(cols_x, cols_z=(), scope=None):
            pivots = []
            for arr, col in [(x, c) for c in cols_x] + [(z, c) for c in cols_z]:
                cand = np.flatnonzero(arr[:, col].astype(bool) & ~used)
                if cand.size == 0:
                    continue
                piv = int(cand[0])
                used[piv] = True
                mask = arr[:, col].astype(bool)
                if scope is not None:
                    mask &= scope
                mask[piv] = False
                if mask.any():
                    p[mask] += p[piv] + 2 * (z[mask] & x[piv]).sum(axis=1, dtype=np.int64)
                    x[mask] ^= x[piv]
                    z[mask] ^= z[piv]
                    C[mask] ^= C[piv]
                pivots.append(piv)
            return pivots

        frozen_cols = np.flatnonzero(state.frozen)
        self.coin_rows = eliminate(frozen_cols)
        rest_mask = ~used
        dense = state.dense_qubits
        # Dense elimination only touches rows without frozen X support.
        saved = used.copy()
        used[:] = True
        used[rest_mask] = False
        self.dense_rows = eliminate(dense, dense, scope=rest_mask)
        used = saved
        taken = set(self.coin_rows) | set(self.dense_rows)
        self.fixed_rows = [i for i in range(L) if i not in taken]
        p %= 4
        self.fixed_bits = []
        for i in self.fixed_rows:
            if x[i].any() or (z[i, dense].any() if dense else False):
                raise AssertionError("elimination left a non-trivial row")
            if p[i] % 2:
                raise ValueError("measured set is inconsistent (non-Hermitian product)")
            self.fixed_bits.append(int(p[i] // 2))
        # Joint law of the dense rows on phi.
        branches = state.phi[None]
        for i in self.dense_rows:
            P = PauliOp(x[i], z[i], int(p[i]))
            applied = np.stack([state._dense_apply(P, b) for b in branches])
            branches = np.concatenate([0.5 * (branches + applied), 0.5 * (branches - applied)])
        # Bit i of a branch index is the outcome of dense row i.
        probs = np.array([np.real(np.vdot(b, b)) for b in branches])
        probs = np.clip(probs, 0, None)
        self.dense_probs = probs / probs.sum()
        self.Cinv_T = gf2kit.inverse(C).T.copy()

    def _assemble(self, coin: np.ndarray, dense_idx: np.ndarray) -> np.ndarray:
        m = coin.shape[0]
        bh = np.zeros((m, self.L), dtype=np.uint8)
        if self.coin_rows:
            bh[:, self.coin_rows] = coin
        kd = len(self.dense_rows)
        if kd:
            shifts = np.arange(kd)
            bh[:, self.dense_rows] = (dense_idx[:, None] >> shifts) & 1
        if self.fixed_rows:
            bh[:, self.fixed_rows] = np.array(self.fixed_bits, dtype=np.uint8)
        return gf2kit.matmul(bh, self.Cinv_T)

    def sample(self, shots: int, rng: np.random.Generator) -> np.ndarray:
        """``(shots, L)`` outcome bits, one row per fresh copy."""
        coin = rng.integers(0, 2, size=(shots, len(self.coin_rows)), dtype=np.uint8)
        dense_idx = rng.choice(self.dense_probs.size, size=shots, p=self.dense_probs)
        return self._assemble(coin, dense_idx)

    def counts(self, shots: int, rng: np.random.Generator):
        """Histogram ``(patterns, counts)`` of ``shots`` copies, drawn exactly.

        Cells are drawn from the multinomial law when the support is small, so
        very large shot counts cost nothing extra.
        """
        if shots <= 0:
            return np.zeros((0, self.L), dtype=np.uint8), np.zeros(0, dtype=np.int64)
        na = len(self.coin_rows)
        dense_counts = rng.multinomial(shots, self.dense_probs)
        coins, idxs, cnts = [], [], []
        for d in np.flatnonzero(dense_counts):
            c = int(dense_counts[d])
            if na == 0:
                coins.append(np.zeros((1, 0), dtype=np.uint8))
                idxs.append(np.array([d]))
                cnts.append(np.array([c]))
            elif (1 << na) <= _MULTINOMIAL_CELLS:
                cell = rng.multinomial(c, np.full(1 << na, 1.0 / (1 << na)))
                hit = np.flatnonzero(cell)
                shifts = np.arange(na - 1, -1, -1)
                coins.append(((hit[:, None] >> shifts) & 1).astype(np.uint8))
                idxs.append(np.full(hit.size, d))
                cnts.append(cell[hit])
            elif c <= _MAX_INDIVIDUAL:
                draws = rng.integers(0, 2, size=(c, na), dtype=np.uint8)
                uniq, cc = np.unique(draws, axis=0, return_counts=True)
                coins.append(uniq)
                idxs.append(np.full(uniq.shape[0], d))
                cnts.append(cc)
            else:
                raise CapacityError(
                    f"{c} shots over 2**{na} equiprobable outcomes is too large to histogram"
                )
        patterns = self._assemble(np.concatenate(coins), np.concatenate(idxs))
        return patterns, np.concatenate(cnts).astype(np.int64)
