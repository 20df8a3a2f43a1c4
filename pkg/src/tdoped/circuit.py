"""Circuits over {H, S, CNOT, X, Z, T, RZ} and their line-oriented text format.

One gate per line, qubits 0-indexed, ``#`` starts a comment line::

    H 3
    CNOT 0 5
    T 4
    RZ 4 0.785398163397
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CircuitParseError

ARITY = {"H": 1, "S": 1, "SDG": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2, "CZ": 2, "T": 1, "RZ": 1}
TEXT_GATES = ("H", "S", "CNOT", "X", "Z", "T", "RZ")
CLIFFORD_1Q = ("H", "S", "X", "Z")

_HALF_PI = math.pi / 2


def clifford_quarter_turns(theta: float, tol: float = 1e-12) -> int | None:
    """``k`` if ``theta = k*pi/2`` (mod 2*pi), else None."""
    k = theta / _HALF_PI
    kr = round(k)
    if abs(k - kr) <= tol * max(1.0, abs(k)):
        return kr % 4
    return None


def is_non_clifford(gate: tuple) -> bool:
    if gate[0] == "T":
        return True
    if gate[0] == "RZ":
        return clifford_quarter_turns(gate[2]) is None
    return False


@dataclass
class Circuit:
    n: int
    gates: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: tuple) -> None:
        name = g[0]
        if name not in ARITY:
            raise ValueError(f"unknown gate {name!r}")
        qubits = g[1:1 + ARITY[name]]
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        if ARITY[name] == 2 and qubits[0] == qubits[1]:
            raise ValueError(f"{name} needs distinct qubits")
        if name == "RZ" and not math.isfinite(g[2]):
            raise ValueError("rotation angle must be finite")

    def append(self, *gate) -> Circuit:
        self._check(gate)
        self.gates.append(tuple(gate))
        return self

    @property
    def doped_count(self) -> int:
        return sum(is_non_clifford(g) for g in self.gates)

    def to_text(self) -> str:
        lines = []
        for g in self.gates:
            if g[0] == "RZ":
                lines.append(f"RZ {g[1]} {g[2]:.12f}")
            else:
                lines.append(" ".join(str(v) for v in g))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> Circuit:
        """Parse the text format.  ``n`` defaults to one more than the largest qubit."""
        gates = []
        max_q = -1
        for lineno, line in enumerate(text.splitlines(), start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            name = parts[0].upper()
            if name not in ARITY:
                raise CircuitParseError(lineno, line, f"unknown gate {parts[0]!r}")
            arity = ARITY[name]
            expected = arity + (1 if name == "RZ" else 0)
            if len(parts) - 1 != expected:
                raise CircuitParseError(lineno, line, f"{name} takes {expected} argument(s)")
            try:
                qubits = [int(v) for v in parts[1:1 + arity]]
            except ValueError:
                raise CircuitParseError(lineno, line, "qubit index is not an integer") from None
            if any(q < 0 for q in qubits):
                raise CircuitParseError(lineno, line, "negative qubit index")
            if arity == 2 and qubits[0] == qubits[1]:
                raise CircuitParseError(lineno, line, "two-qubit gate on a single qubit")
            if n is not None and any(q >= n for q in qubits):
                raise CircuitParseError(lineno, line, f"qubit index out of range for n={n}")
            gate: tuple = (name, *qubits)
            if name == "RZ":
                try:
                    theta = float(parts[-1])
                except ValueError:
                    raise CircuitParseError(lineno, line, "angle is not a number") from None
                if not math.isfinite(theta):
                    raise CircuitParseError(lineno, line, "angle must be finite")
                gate = gate + (theta,)
            max_q = max(max_q, *qubits)
            gates.append(gate)
        if n is None:
            n = max(max_q + 1, 1)
        return cls(n, gates)

    @classmethod
    def load(cls, path: str | Path, n: int | None = None) -> Circuit:
        return cls.from_text(Path(path).read_text(), n)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


def random_clifford_gates(n: int, count: int, rng: np.random.Generator) -> list[tuple]:
    gates = []
    for _ in range(count):
        if n > 1 and rng.random() < 0.4:
            c, t = (int(v) for v in rng.choice(n, size=2, replace=False))
            gates.append(("CNOT", c, t))
        else:
            gates.append((CLIFFORD_1Q[int(rng.integers(len(CLIFFORD_1Q)))], int(rng.integers(n))))
    return gates


def random_doped_circuit(n: int, t: int, depth: int, rng: np.random.Generator) -> Circuit:
    """``depth`` random Clifford gates with exactly ``t`` T gates spread among them."""
    if n < 1 or t < 0 or depth < t:
        raise ValueError("need n >= 1, t >= 0 and depth >= t")
    gates = random_clifford_gates(n, depth, rng)
    slots = sorted(rng.choice(depth + 1, size=t, replace=True).tolist())
    out: list[tuple] = []
    k = 0
    for i in range(depth + 1):
        while k < t and slots[k] == i:
            out.append(("T", int(rng.integers(n))))
            k += 1
        if i < depth:
            out.append(gates[i])
    return Circuit(n, out)


def layered_doped_circuit(n: int, t: int, depth: int, rng: np.random.Generator) -> Circuit:
    """Random Clifford blocks separated by ``t`` magic insertions ``H q; T q``.

    The ``H`` before each ``T`` keeps the insertion from acting trivially on a
    computational basis state when it lands early.
    """
    if n < 1 or t < 0 or depth < 0:
        raise ValueError("need n >= 1, t >= 0 and depth >= 0")
    block = depth // (t + 1)
    gates: list[tuple] = []
    for _ in range(t):
        gates += random_clifford_gates(n, block, rng)
        q = int(rng.integers(n))
        gates += [("H", q), ("T", q)]
    gates += random_clifford_gates(n, depth - t * block, rng)
    return Circuit(n, gates)
