"""Brute-force statevector reference.

Amplitude index ``i`` has qubit 0 as its most significant bit, matching the
left-to-right order of Pauli strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit
from .errors import CapacityError
from .pauli import PauliOp, StabilizerGroup

DEFAULT_CAP = 14

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_ONE_QUBIT = {
    "H": _H,
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
}


@dataclass
class DenseState:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n: int) -> DenseState:
        amp = np.zeros(2**n, dtype=complex)
        amp[0] = 1.0
        return cls(n, amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> DenseState:
        return DenseState(self.n, self.amplitudes.copy())


def _apply_1q(psi: np.ndarray, n: int, q: int, U: np.ndarray) -> np.ndarray:
    t = psi.reshape((2,) * n)
    t = np.moveaxis(np.tensordot(U, t, axes=([1], [q])), 0, q)
    return t.reshape(-1)


def apply_gate(psi: np.ndarray, n: int, gate: Sequence) -> np.ndarray:
    name = gate[0]
    if name in _ONE_QUBIT:
        return _apply_1q(psi, n, gate[1], _ONE_QUBIT[name])
    if name == "RZ":
        th = gate[2]
        return _apply_1q(psi, n, gate[1], np.diag([np.exp(-0.5j * th), np.exp(0.5j * th)]))
    t = psi.reshape((2,) * n).copy()
    c, tg = gate[1], gate[2]
    sl = [slice(None)] * n
    sl[c] = 1
    sub = t[tuple(sl)]
    axis = tg if tg < c else tg - 1
    if name == "CNOT":
        t[tuple(sl)] = np.flip(sub, axis=axis).copy()
    elif name == "CZ":
        idx = [slice(None)] * (n - 1)
        idx[axis] = 1
        sub = sub.copy()
        sub[tuple(idx)] *= -1
        t[tuple(sl)] = sub
    else:
        raise ValueError(f"unknown gate {name!r}")
    return t.reshape(-1)


def apply_gates(psi: np.ndarray, n: int, gates: Iterable[Sequence]) -> np.ndarray:
    for g in gates:
        psi = apply_gate(psi, n, g)
    return psi


def simulate_circuit(circuit: Circuit, cap: int = DEFAULT_CAP) -> DenseState:
    if circuit.n > cap:
        raise CapacityError(f"dense oracle capped at {cap} qubits, circuit has {circuit.n}")
    psi = DenseState.zero(circuit.n).amplitudes
    return DenseState(circuit.n, apply_gates(psi, circuit.n, circuit.gates))


def _masks(g: PauliOp) -> tuple[int, int]:
    n = g.n
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return int(weights @ g.x), int(weights @ g.z)


def apply_pauli(psi: np.ndarray, g: PauliOp) -> np.ndarray:
    """``g |psi>`` via index arithmetic (no matrix construction)."""
    xm, zm = _masks(g)
    idx = np.arange(psi.size, dtype=np.int64)
    src = idx ^ xm
    signs = 1 - 2 * (np.bitwise_count(src & zm).astype(np.int64) & 1)
    return (1j ** g.phase) * signs * psi[src]


def _require_hermitian(g: PauliOp) -> None:
    if not g.is_hermitian():
        raise ValueError(f"{g} is not Hermitian")


def pauli_expectation(state: DenseState, g: PauliOp) -> float:
    _require_hermitian(g)
    psi = state.amplitudes
    return float(np.real(np.vdot(psi, apply_pauli(psi, g))))


def trace_distance_pure(a: DenseState, b: DenseState) -> float:
    if a.n != b.n:
        raise ValueError("states have different qubit counts")
    ov = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return math.sqrt(max(0.0, 1.0 - min(1.0, ov)))


def project(psi: np.ndarray, g: PauliOp, outcome: int = 0) -> np.ndarray:
    """Unnormalized ``(I + (-1)^outcome g)/2 |psi>``."""
    return 0.5 * (psi + (-1) ** outcome * apply_pauli(psi, g))


def code_space_weight(state: DenseState, S: StabilizerGroup) -> float:
    """``<psi| Pi |psi>`` with ``Pi = prod (I + g_i)/2``."""
    v = state.amplitudes
    for g in S.generators:
        v = project(v, g)
    return float(np.real(np.vdot(v, v)))


def distance_to_code(state: DenseState, S: StabilizerGroup, cap: int = DEFAULT_CAP) -> float:
    if state.n > cap:
        raise CapacityError(f"dense oracle capped at {cap} qubits")
    w = code_space_weight(state, S)
    return math.sqrt(max(0.0, 1.0 - min(1.0, w)))


def outcome_distribution(state: DenseState, paulis: Sequence[PauliOp], tol: float = 1e-14):
    """Joint outcome probabilities of measuring commuting Paulis in sequence.

    Returns ``(patterns, probs)`` with ``patterns`` an ``(u, L)`` 0/1 array.
    Branches with probability below ``tol`` are pruned.
    """
    branches = [((), state.amplitudes)]
    for g in paulis:
        _require_hermitian(g)
        nxt = []
        for bits, v in branches:
            gv = apply_pauli(v, g)
            for b in (0, 1):
                w = 0.5 * (v + (-1) ** b * gv)
                if np.real(np.vdot(w, w)) > tol:
                    nxt.append((bits + (b,), w))
        branches = nxt
    patterns = np.array([b for b, _ in branches], dtype=np.uint8).reshape(len(branches), len(paulis))
    probs = np.array([np.real(np.vdot(v, v)) for _, v in branches])
    return patterns, probs / probs.sum()


def random_state(n: int, rng: np.random.Generator) -> DenseState:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return DenseState(n, v / np.linalg.norm(v))


def stabilizer_state(S: StabilizerGroup) -> DenseState:
    """The unique state of a rank-n group, by projecting a generic vector."""
    if S.rank != S.n:
        raise ValueError("need a maximal stabilizer group")
    v = np.ones(2**S.n, dtype=complex) + 0.1j * np.arange(2**S.n)
    for g in S.generators:
        v = project(v, g)
    nv = np.linalg.norm(v)
    if nv < 1e-9:
        # The generic vector was orthogonal; fall back to basis vectors.
        for k in range(2**S.n):
            v = np.zeros(2**S.n, dtype=complex)
            v[k] = 1
            for g in S.generators:
                v = project(v, g)
            nv = np.linalg.norm(v)
            if nv > 1e-9:
                break
    return DenseState(S.n, v / nv)
