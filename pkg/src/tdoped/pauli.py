"""Pauli algebra, stabilizer groups and Clifford tableaux.

A Pauli operator is stored as ``i**phase * X**x * Z**z`` where the product runs
over qubits and each factor is written X-before-Z.  With this ordering the
product rule is purely combinatorial::

    (p1, x1, z1) * (p2, x2, z2) = (p1 + p2 + 2|z1 & x2|, x1 ^ x2, z1 ^ z2)

and an operator is Hermitian iff ``phase = |x & z| (mod 2)``.  ``Y`` is
``i X Z``.  Qubit 0 is the leftmost letter of the text form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2kit
from .gf2kit import BitMatrix, BitVec

_SIGN_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}

CLIFFORD_GATES = {"H": 1, "S": 1, "SDG": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2, "CZ": 2}


class PauliError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PauliOp:
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8) & 1
        z = np.asarray(self.z, dtype=np.uint8) & 1
        if x.shape != z.shape or x.ndim != 1:
            raise PauliError("x and z must be 1-d arrays of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0)

    @classmethod
    def hermitian(cls, x, z, negative: bool = False) -> PauliOp:
        """The ``+`` (or ``-``) Hermitian operator with symplectic part (x, z)."""
        x = np.asarray(x, dtype=np.uint8) & 1
        z = np.asarray(z, dtype=np.uint8) & 1
        return cls(x, z, int(np.sum(x & z)) + 2 * int(negative))

    @classmethod
    def single(cls, n: int, q: int, letter: str, negative: bool = False) -> PauliOp:
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        if letter in "XY":
            x[q] = 1
        if letter in "ZY":
            z[q] = 1
        return cls.hermitian(x, z, negative)

    @classmethod
    def from_string(cls, text: str) -> PauliOp:
        """Parse ``"+XIZY"``, ``"-IZ"``, ``"+iXX"`` style strings."""
        s = text.strip()
        sign = 0
        for prefix, p in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if s.startswith(prefix):
                sign = p
                s = s[len(prefix):]
                break
        if not s or any(c not in "IXYZ" for c in s):
            raise PauliError(f"cannot parse Pauli string {text!r}")
        x = np.array([c in "XY" for c in s], dtype=np.uint8)
        z = np.array([c in "ZY" for c in s], dtype=np.uint8)
        return cls(x, z, sign + int(np.sum(x & z)))

    @property
    def sign_power(self) -> int:
        """Phase relative to the Hermitian letter form: the op is ``i**k * letters``."""
        return (self.phase - int(np.sum(self.x & self.z))) % 4

    def __str__(self) -> str:
        letters = "".join(_LETTER[(int(a), int(b))] for a, b in zip(self.x, self.z))
        return _SIGN_PREFIX[self.sign_power] + letters

    def __repr__(self) -> str:
        return f"PauliOp({str(self)!r})"

    def is_hermitian(self) -> bool:
        return self.sign_power % 2 == 0

    def is_identity(self) -> bool:
        return not self.x.any() and not self.z.any()

    @property
    def negative(self) -> bool:
        return self.sign_power == 2

    def unsigned(self) -> PauliOp:
        return PauliOp.hermitian(self.x, self.z)

    def symplectic(self) -> BitVec:
        return BitVec.from_bits(np.concatenate([self.x, self.z]))

    def __mul__(self, other: PauliOp) -> PauliOp:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliOp:
        return PauliOp(self.x, self.z, self.phase + 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix, qubit 0 as the most significant factor."""
        xm = np.array([[0, 1], [1, 0]], dtype=complex)
        zm = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1.0 + 0j]])
        for a, b in zip(self.x, self.z):
            f = np.eye(2, dtype=complex)
            if a:
                f = f @ xm
            if b:
                f = f @ zm
            out = np.kron(out, f)
        return (1j ** self.phase) * out


def _check_n(a: int, b: int) -> None:
    if a != b:
        raise PauliError(f"qubit count mismatch: {a} != {b}")


def pauli_mul(g: PauliOp, h: PauliOp) -> PauliOp:
    _check_n(g.n, h.n)
    return PauliOp(g.x ^ h.x, g.z ^ h.z, g.phase + h.phase + 2 * int(np.sum(g.z & h.x)))


def pauli_commutes(g: PauliOp, h: PauliOp) -> bool:
    _check_n(g.n, h.n)
    return (int(np.sum(g.x & h.z)) + int(np.sum(g.z & h.x))) % 2 == 0


def symplectic_products(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise symplectic products of ``(x|z)`` rows, as a 0/1 matrix."""
    n = A.shape[1] // 2
    swapped = np.concatenate([B[:, n:], B[:, :n]], axis=1)
    return gf2kit.matmul(A, swapped.T)


def combine(xs: np.ndarray, zs: np.ndarray, ps: np.ndarray, coeffs: np.ndarray):
    """Ordered products ``prod_k P_k**c_k`` for every coefficient row ``c``.

    ``xs, zs`` are ``(K, n)``, ``ps`` is ``(K,)`` and ``coeffs`` is ``(B, K)``.
    The factors are multiplied in index order; the phase picks up
    ``2 * sum_{k<l} c_k c_l |z_k & x_l|``.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.uint8))
    xz = gf2kit.matmul(coeffs, np.concatenate([xs, zs], axis=1))
    n = xs.shape[1]
    overlap = (np.asarray(zs, np.float32) @ np.asarray(xs, np.float32).T).astype(np.int64) & 1
    upper = np.triu(overlap, k=1).astype(np.float32)
    c = coeffs.astype(np.float32)
    quad = np.rint(((c @ upper) * c).sum(axis=1)).astype(np.int64)
    lin = coeffs.astype(np.int64) @ (np.asarray(ps, dtype=np.int64) % 4)
    return xz[:, :n], xz[:, n:], (lin + 2 * quad) % 4


def _gate_on_rows(x: np.ndarray, z: np.ndarray, p: np.ndarray, gate: Sequence) -> None:
    """Conjugate Pauli rows in place: P -> G P G^dagger."""
    name = gate[0]
    if name in ("CNOT", "CZ"):
        c, t = gate[1], gate[2]
        if name == "CNOT":
            x[:, t] ^= x[:, c]
            z[:, c] ^= z[:, t]
        else:
            p += 2 * (x[:, c] & x[:, t])
            z[:, c] ^= x[:, t]
            z[:, t] ^= x[:, c]
        return
    q = gate[1]
    a, b = x[:, q].copy(), z[:, q].copy()
    if name == "H":
        p += 2 * (a & b)
        x[:, q], z[:, q] = b, a
    elif name == "S":
        p += a
        z[:, q] ^= a
    elif name == "SDG":
        p += 3 * a
        z[:, q] ^= a
    elif name == "X":
        p += 2 * b
    elif name == "Z":
        p += 2 * a
    elif name == "Y":
        p += 2 * (a ^ b)
    else:
        raise PauliError(f"unknown Clifford gate {name!r}")


def conjugate_by_gate(g: PauliOp, gate: Sequence) -> PauliOp:
    x, z = g.x[None].copy(), g.z[None].copy()
    p = np.array([g.phase], dtype=np.int64)
    _check_gate(gate, g.n)
    _gate_on_rows(x, z, p, gate)
    return PauliOp(x[0], z[0], int(p[0]))


_INVERSE_GATE = {"S": "SDG", "SDG": "S"}


def inverse_gate(gate: Sequence) -> tuple:
    return (_INVERSE_GATE.get(gate[0], gate[0]),) + tuple(gate[1:])


def _check_gate(gate: Sequence, n: int) -> None:
    name = gate[0]
    if name not in CLIFFORD_GATES:
        raise PauliError(f"unknown Clifford gate {name!r}")
    qubits = gate[1:]
    if len(qubits) != CLIFFORD_GATES[name]:
        raise PauliError(f"gate {name} expects {CLIFFORD_GATES[name]} qubit(s)")
    for q in qubits:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for n={n}")
    if len(qubits) == 2 and qubits[0] == qubits[1]:
        raise PauliError(f"gate {name} needs two distinct qubits")


class CliffordTableau:
    """Images ``U X_j U^dag`` (rows ``0..n-1``) and ``U Z_j U^dag`` (rows ``n..2n-1``)."""

    def __init__(self, x: np.ndarray, z: np.ndarray, phase: np.ndarray):
        self.x = np.asarray(x, dtype=np.uint8)
        self.z = np.asarray(z, dtype=np.uint8)
        self.phase = np.asarray(phase, dtype=np.int64) % 4
        self.n = self.x.shape[1]
        if self.x.shape != (2 * self.n, self.n) or self.z.shape != self.x.shape:
            raise PauliError("tableau arrays must have shape (2n, n)")

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        return cls(np.vstack([eye, zero]), np.vstack([zero, eye]), np.zeros(2 * n, np.int64))

    @classmethod
    def from_images(cls, images: Sequence[PauliOp]) -> CliffordTableau:
        return cls(
            np.stack([g.x for g in images]),
            np.stack([g.z for g in images]),
            np.array([g.phase for g in images]),
        )

    def copy(self) -> CliffordTableau:
        return CliffordTableau(self.x.copy(), self.z.copy(), self.phase.copy())

    def image(self, k: int) -> PauliOp:
        return PauliOp(self.x[k], self.z[k], int(self.phase[k]))

    def x_image(self, j: int) -> PauliOp:
        return self.image(j)

    def z_image(self, j: int) -> PauliOp:
        return self.image(self.n + j)

    def images(self) -> list[PauliOp]:
        return [self.image(k) for k in range(2 * self.n)]

    def symplectic_matrix(self) -> np.ndarray:
        return np.concatenate([self.x, self.z], axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.phase % 4, other.phase % 4)
        )

    def __repr__(self) -> str:
        rows = [f"X{j} -> {self.image(j)}" for j in range(self.n)]
        rows += [f"Z{j} -> {self.image(self.n + j)}" for j in range(self.n)]
        return "CliffordTableau(\n  " + "\n  ".join(rows) + "\n)"

    def is_valid(self) -> bool:
        """Symplectic images with Hermitian phases."""
        M = self.symplectic_matrix()
        n = self.n
        omega = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        omega[:n, n:] = np.eye(n, dtype=np.uint8)
        omega[n:, :n] = np.eye(n, dtype=np.uint8)
        if not np.array_equal(gf2kit.matmul(gf2kit.matmul(M, omega), M.T), omega):
            return False
        herm = (self.phase - np.sum(self.x & self.z, axis=1)) % 2 == 0
        return bool(herm.all())

    # --- conjugation -------------------------------------------------------

    def conjugate_rows(self, x: np.ndarray, z: np.ndarray, p: np.ndarray):
        """``U P U^dag`` for each row ``(x, z, p)``; arrays are ``(B, n)``, ``(B,)``."""
        coeffs = np.concatenate([np.atleast_2d(x), np.atleast_2d(z)], axis=1)
        ox, oz, op = combine(self.x, self.z, self.phase, coeffs)
        return ox, oz, (op + np.asarray(p, dtype=np.int64)) % 4

    def conjugate(self, g: PauliOp) -> PauliOp:
        _check_n(g.n, self.n)
        ox, oz, op = self.conjugate_rows(g.x[None], g.z[None], np.array([g.phase]))
        return PauliOp(ox[0], oz[0], int(op[0]))

    def conjugate_many(self, paulis: Sequence[PauliOp]) -> list[PauliOp]:
        if not paulis:
            return []
        for g in paulis:
            _check_n(g.n, self.n)
        ox, oz, op = self.conjugate_rows(
            np.stack([g.x for g in paulis]),
            np.stack([g.z for g in paulis]),
            np.array([g.phase for g in paulis]),
        )
        return [PauliOp(ox[i], oz[i], int(op[i])) for i in range(len(paulis))]

    # --- gate updates --------------------------------------------------------

    def apply_gate(self, gate: Sequence) -> CliffordTableau:
        """Left-multiply in place: ``U <- G U`` (the gate acts after ``U``)."""
        _check_gate(gate, self.n)
        _gate_on_rows(self.x, self.z, self.phase, gate)
        self.phase %= 4
        return self

    def prepend_gate(self, gate: Sequence) -> CliffordTableau:
        """Right-multiply in place: ``U <- U G`` (the gate acts before ``U``)."""
        _check_gate(gate, self.n)
        n = self.n
        rows = sorted({q for q in gate[1:]} | {n + q for q in gate[1:]})
        m = len(rows)
        x = np.zeros((m, n), dtype=np.uint8)
        z = np.zeros((m, n), dtype=np.uint8)
        for i, k in enumerate(rows):
            (x if k < n else z)[i, k % n] = 1
        p = np.zeros(m, dtype=np.int64)
        _gate_on_rows(x, z, p, gate)
        ox, oz, op = self.conjugate_rows(x, z, p)
        self.x[rows], self.z[rows], self.phase[rows] = ox, oz, op
        return self

    def then(self, gates: Iterable[Sequence]) -> CliffordTableau:
        for g in gates:
            self.apply_gate(g)
        return self


def tableau_from_gates(n: int, gates: Iterable[Sequence]) -> CliffordTableau:
    return CliffordTableau.identity(n).then(gates)


def tableau_compose(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    """The Clifford ``a b``: apply ``b`` first, then ``a``."""
    _check_n(a.n, b.n)
    ox, oz, op = a.conjugate_rows(b.x, b.z, b.phase)
    return CliffordTableau(ox, oz, op)


def tableau_inverse(t: CliffordTableau) -> CliffordTableau:
    n = t.n
    M = t.symplectic_matrix()
    # M^{-1} = Omega M^T Omega for symplectic M.
    Mt = M.T
    inv = np.concatenate(
        [np.concatenate([Mt[n:, n:], Mt[n:, :n]], axis=1),
         np.concatenate([Mt[:n, n:], Mt[:n, :n]], axis=1)],
        axis=0,
    )
    x, z = inv[:, :n].copy(), inv[:, n:].copy()
    p = np.sum(x & z, axis=1).astype(np.int64)
    _, _, back = t.conjugate_rows(x, z, p)
    p = (p + back) % 4
    out = CliffordTableau(x, z, p)
    if not np.array_equal(tableau_compose(t, out).symplectic_matrix(), np.eye(2 * n, dtype=np.uint8)):
        raise PauliError("tableau is not symplectic")
    return out


def conjugate(tableau: CliffordTableau, g: PauliOp) -> PauliOp:
    return tableau.conjugate(g)


# --- stabilizer groups -------------------------------------------------------


@dataclass
class StabilizerGroup:
    n: int
    generators: list[PauliOp] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def symplectic_matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.stack([np.concatenate([g.x, g.z]) for g in self.generators])

    def arrays(self):
        xs = np.stack([g.x for g in self.generators])
        zs = np.stack([g.z for g in self.generators])
        ps = np.array([g.phase for g in self.generators], dtype=np.int64)
        return xs, zs, ps

    def element(self, a) -> PauliOp:
        """``g(a) = prod_i g_i**a_i`` in generator order."""
        a = np.asarray(a, dtype=np.uint8)
        if a.size != self.rank:
            raise PauliError("coefficient vector has the wrong length")
        if self.rank == 0:
            return PauliOp.identity(self.n)
        x, z, p = combine(*self.arrays(), a[None])
        return PauliOp(x[0], z[0], int(p[0]))

    def check(self) -> None:
        """Raise if any group invariant is violated."""
        if self.rank > self.n:
            raise PauliError("more generators than qubits")
        for g in self.generators:
            _check_n(g.n, self.n)
            if not g.is_hermitian():
                raise PauliError(f"generator {g} is not Hermitian")
        if self.rank == 0:
            return
        M = self.symplectic_matrix()
        if symplectic_products(M, M).any():
            raise PauliError("generators do not commute")
        if gf2kit.rank(BitMatrix.from_array(M)) != self.rank:
            raise PauliError("generators are not independent")

    def is_valid(self) -> bool:
        try:
            self.check()
        except PauliError:
            return False
        return True

    def contains_unsigned(self, g: PauliOp) -> bool:
        if self.rank == 0:
            return g.is_identity()
        return gf2kit.in_row_span(BitMatrix.from_array(self.symplectic_matrix()), g.symplectic())

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    @classmethod
    def from_strings(cls, strings: Sequence[str], n: int | None = None) -> StabilizerGroup:
        gens = [PauliOp.from_string(s) for s in strings]
        if n is None:
            if not gens:
                raise PauliError("n required for an empty group")
            n = gens[0].n
        return cls(n, gens)

    @classmethod
    def computational(cls, n: int, r: int | None = None) -> StabilizerGroup:
        r = n if r is None else r
        return cls(n, [PauliOp.single(n, j, "Z") for j in range(r)])


def add_if_independent(R: StabilizerGroup, g: PauliOp) -> tuple[StabilizerGroup, bool]:
    """Append ``g`` unless its unsigned row already lies in the span of ``R``."""
    _check_n(g.n, R.n)
    if not g.is_hermitian():
        raise PauliError(f"{g} is not Hermitian")
    for h in R.generators:
        if not pauli_commutes(g, h):
            raise PauliError(f"{g} anticommutes with {h}")
    if g.is_identity() or R.contains_unsigned(g):
        return R, False
    return StabilizerGroup(R.n, R.generators + [g]), True


def random_stabilizer_group(n: int, rng: np.random.Generator) -> StabilizerGroup:
    """Uniformly random maximal stabilizer group with independent random signs.

    Generators are drawn one at a time, each uniformly from the commutant of the
    previous ones minus their span.  Every maximal isotropic subspace has the
    same number of ordered bases, so the unsigned group is uniform.
    """
    if n < 1:
        raise PauliError("n must be positive")
    chosen = np.zeros((0, 2 * n), dtype=np.uint8)
    others = np.eye(2 * n, dtype=np.uint8)
    for j in range(n):
        m = others.shape[0]
        co = rng.integers(0, 2, size=m, dtype=np.uint8)
        while not co.any():
            co = rng.integers(0, 2, size=m, dtype=np.uint8)
        cs = rng.integers(0, 2, size=j, dtype=np.uint8)
        v = (co @ others + cs @ chosen) & 1
        v = v.astype(np.uint8)
        p = int(np.flatnonzero(co)[0])
        others = np.delete(others, p, axis=0)
        chosen = np.vstack([chosen, v])
        swapped = np.concatenate([v[n:], v[:n]])
        prods = (others.astype(np.int64) @ swapped) & 1
        hit = np.flatnonzero(prods)
        q = int(hit[0])
        others[hit[1:]] ^= others[q]
        others = np.delete(others, q, axis=0)
    signs = rng.integers(0, 2, size=n)
    gens = [PauliOp.hermitian(chosen[i, :n], chosen[i, n:], bool(signs[i])) for i in range(n)]
    return StabilizerGroup(n, gens)


def _symplectic_gram_schmidt(pool: np.ndarray, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Symplectic pairs spanning the nondegenerate space spanned by ``pool``."""
    pool = pool[pool.any(axis=1)]
    pairs = []
    while pool.shape[0]:
        u = pool[0]
        rest = pool[1:]
        prods = symplectic_products(rest, u[None])[:, 0]
        hit = np.flatnonzero(prods)
        if hit.size == 0:
            pool = rest
            continue
        w = rest[hit[0]].copy()
        rest = np.delete(rest, hit[0], axis=0)
        a = symplectic_products(rest, w[None])[:, 0]
        b = symplectic_products(rest, u[None])[:, 0]
        rest = rest ^ (a[:, None] & u[None]) ^ (b[:, None] & w[None])
        pairs.append((u.copy(), w))
        pool = rest[rest.any(axis=1)]
    return pairs


def encoding_circuit(S: StabilizerGroup) -> CliffordTableau:
    """A Clifford ``V`` with ``V Z_j V^dag = g_j`` for every generator ``g_j``.

    The remaining images are a symplectic completion: destabilizers on
    ``X_j`` for ``j < r`` and logical pairs on the last ``n - r`` qubits.
    """
    S.check()
    n, r = S.n, S.rank
    G = S.symplectic_matrix()
    images_x = np.zeros((n, 2 * n), dtype=np.uint8)
    images_z = np.zeros((n, 2 * n), dtype=np.uint8)
    if r:
        swapped = np.concatenate([G[:, n:], G[:, :n]], axis=1)
        D = gf2kit.right_inverse(swapped).T.copy()
        # Make destabilizers mutually commuting by adding stabilizers.
        for i in range(r):
            for j in range(i):
                if symplectic_products(D[i:i + 1], D[j:j + 1])[0, 0]:
                    D[i] ^= G[j]
        images_z[:r] = G
        images_x[:r] = D
        basis = np.eye(2 * n, dtype=np.uint8)
        to_d = symplectic_products(basis, D)
        to_g = symplectic_products(basis, G)
        pool = basis ^ gf2kit.matmul(to_d, G) ^ gf2kit.matmul(to_g, D)
    else:
        pool = np.eye(2 * n, dtype=np.uint8)
    pairs = _symplectic_gram_schmidt(pool, n)
    if len(pairs) != n - r:
        raise PauliError("symplectic completion failed")
    for k, (u, w) in enumerate(pairs):
        images_x[r + k] = u
        images_z[r + k] = w
    images = [PauliOp.hermitian(v[:n], v[n:]) for v in images_x]
    images += [PauliOp.hermitian(v[:n], v[n:]) for v in images_z]
    for j, g in enumerate(S.generators):
        images[n + j] = g
    return CliffordTableau.from_images(images)


def tableau_to_gates(t: CliffordTableau) -> list[tuple]:
    """Decompose a tableau into H, S, CNOT, X, Z gates (in time order)."""
    n = t.n
    u = t.copy()
    applied: list[tuple] = []

    def apply(g):
        u.apply_gate(g)
        applied.append(g)

    for j in range(n):
        # Bring the image of X_j to +-X_j.
        for k in range(j, n):
            a, b = u.x[j, k], u.z[j, k]
            if not a and b:
                apply(("H", k))
            elif a and b:
                apply(("S", k))
        if not u.x[j, j]:
            k = j + int(np.flatnonzero(u.x[j, j:])[0])
            apply(("CNOT", k, j))
        for k in range(j + 1, n):
            if u.x[j, k]:
                apply(("CNOT", j, k))
        # Now the image of Z_j, keeping X_j fixed (via the H-conjugated frame).
        apply(("H", j))
        zr = n + j
        if u.z[zr, j]:
            apply(("S", j))
        for k in range(j + 1, n):
            a, b = u.x[zr, k], u.z[zr, k]
            if not a and b:
                apply(("H", k))
            elif a and b:
                apply(("S", k))
        for k in range(j + 1, n):
            if u.x[zr, k]:
                apply(("CNOT", j, k))
        apply(("H", j))
    for j in range(n):
        if u.phase[j] == 2:
            apply(("Z", j))
        if u.phase[n + j] == 2:
            apply(("X", j))
    if u != CliffordTableau.identity(n):
        raise PauliError("gate synthesis did not reach the identity")
    out = []
    for g in reversed(applied):
        if g[0] == "S":
            out.extend([g, g, g])
        else:
            out.append(g)
    return out


def encoding_gates(S: StabilizerGroup) -> list[tuple]:
    """Gate list for :func:`encoding_circuit` over H, S, CNOT, X, Z."""
    return tableau_to_gates(encoding_circuit(S))
