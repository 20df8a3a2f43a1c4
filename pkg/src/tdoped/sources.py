"""Single-copy access to an unknown state.

A source hands out fresh, independent copies.  Each copy may be measured
sequentially with commuting Paulis; nothing on this interface acts jointly on
two copies.  Batched calls (``sample``/``counts``) are shorthand for measuring
``shots`` fresh copies one by one and are charged one copy per shot.
"""

from __future__ import annotations

import threading
from typing import Sequence

import numpy as np

from . import denseoracle
from .denseoracle import DenseState
from .hybridsim import HybridState
from .pauli import PauliOp, StabilizerGroup


class StateSource:
    """Base class: keeps the copy counter and the per-copy handle."""

    n: int

    def __init__(self, n: int):
        self.n = n
        self._lock = threading.Lock()
        self._consumed = 0

    @property
    def copies_consumed(self) -> int:
        return self._consumed

    def _charge(self, k: int) -> None:
        if k < 0:
            raise ValueError("negative copy count")
        with self._lock:
            self._consumed += k

    def _check(self, paulis: Sequence[PauliOp]) -> None:
        if not paulis:
            raise ValueError("nothing to measure")
        for g in paulis:
            if g.n != self.n:
                raise ValueError(f"Pauli on {g.n} qubits, source has {self.n}")

    def sample(self, paulis: Sequence[PauliOp], shots: int, rng: np.random.Generator) -> np.ndarray:
        """``(shots, len(paulis))`` outcome bits, one row per fresh copy."""
        self._check(paulis)
        self._charge(shots)
        return self._sample(list(paulis), shots, rng)

    def counts(self, paulis: Sequence[PauliOp], shots: int, rng: np.random.Generator):
        """Histogram ``(patterns, counts)`` over ``shots`` fresh copies."""
        self._check(paulis)
        self._charge(shots)
        return self._counts(list(paulis), shots, rng)

    def fresh_copy(self) -> "CopyHandle":
        self._charge(1)
        return CopyHandle(self._new_copy())

    def _sample(self, paulis, shots, rng):  # pragma: no cover - abstract
        raise NotImplementedError

    def _counts(self, paulis, shots, rng):  # pragma: no cover - abstract
        raise NotImplementedError

    def _new_copy(self):  # pragma: no cover - abstract
        raise NotImplementedError


class CopyHandle:
    """One copy; measurements collapse it in place."""

    def __init__(self, state):
        self._state = state

    def measure_pauli(self, g: PauliOp, rng: np.random.Generator) -> int:
        return self._state.measure_pauli(g, rng)

    def measure_group_basis(self, T: StabilizerGroup, rng: np.random.Generator) -> np.ndarray:
        return np.array([self.measure_pauli(g, rng) for g in T.generators], dtype=np.uint8)


class HybridSource(StateSource):
    """Copies of a prepared :class:`HybridState`."""

    def __init__(self, state: HybridState):
        super().__init__(state.n)
        self.state = state

    def _sample(self, paulis, shots, rng):
        return self.state.sampler(paulis).sample(shots, rng)

    def _counts(self, paulis, shots, rng):
        return self.state.sampler(paulis).counts(shots, rng)

    def _new_copy(self):
        return self.state.copy()


class _DenseCopy:
    def __init__(self, state: DenseState):
        self.psi = state.amplitudes.copy()

    def measure_pauli(self, g: PauliOp, rng: np.random.Generator) -> int:
        w0 = denseoracle.project(self.psi, g, 0)
        p0 = float(np.real(np.vdot(w0, w0)))
        b = int(rng.random() >= p0)
        w = w0 if b == 0 else denseoracle.project(self.psi, g, 1)
        self.psi = w / np.linalg.norm(w)
        return b


class DenseSource(StateSource):
    """Copies of an explicit statevector (reference implementation)."""

    def __init__(self, state: DenseState):
        super().__init__(state.n)
        self.state = state

    def _law(self, paulis):
        return denseoracle.outcome_distribution(self.state, paulis)

    def _sample(self, paulis, shots, rng):
        patterns, probs = self._law(paulis)
        return patterns[rng.choice(len(probs), size=shots, p=probs)]

    def _counts(self, paulis, shots, rng):
        patterns, probs = self._law(paulis)
        c = rng.multinomial(shots, probs)
        keep = c > 0
        return patterns[keep], c[keep].astype(np.int64)

    def _new_copy(self):
        return _DenseCopy(self.state)
