"""Bit-packed linear algebra over GF(2).

Rows are stored as little-endian bit fields in ``uint64`` words: bit ``j`` of a
row lives in word ``j // 64`` at position ``j % 64``.  Trailing bits beyond the
logical length are kept at zero after every operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORD = 64


def _n_words(length: int) -> int:
    return max(1, (length + WORD - 1) // WORD)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a ``(..., L)`` 0/1 array into ``(..., W)`` uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    length = bits.shape[-1]
    w = _n_words(length)
    padded = np.zeros(bits.shape[:-1] + (w * WORD,), dtype=np.uint8)
    padded[..., :length] = bits
    as_bytes = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(as_bytes).view(np.dtype("<u8")).astype(np.uint64)


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`."""
    words = np.ascontiguousarray(np.asarray(words, dtype=np.uint64))
    as_bytes = words.astype("<u8").view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :length]


@dataclass(frozen=True, eq=False)
class BitVec:
    """Fixed-length bit string packed into machine words."""

    words: np.ndarray
    length: int

    @classmethod
    def from_bits(cls, bits) -> BitVec:
        bits = np.asarray(bits, dtype=np.uint8).ravel()
        return cls(pack_bits(bits), bits.size)

    @classmethod
    def zeros(cls, length: int) -> BitVec:
        return cls(np.zeros(_n_words(length), dtype=np.uint64), length)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(f"bit index {j} out of range for length {self.length}")
        return int((int(self.words[j // WORD]) >> (j % WORD)) & 1)

    def __xor__(self, other: BitVec) -> BitVec:
        _check_len(self.length, other.length)
        return BitVec(self.words ^ other.words, self.length)

    def __and__(self, other: BitVec) -> BitVec:
        _check_len(self.length, other.length)
        return BitVec(self.words & other.words, self.length)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def dot(self, other: BitVec) -> int:
        """Inner product mod 2."""
        _check_len(self.length, other.length)
        return int(np.bitwise_count(self.words & other.words).sum()) & 1

    def is_zero(self) -> bool:
        return not self.words.any()

    def __repr__(self) -> str:
        return "BitVec(" + "".join(map(str, self.to_bits())) + ")"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """``m x L`` matrix over GF(2); row ``i`` is ``words[i]``."""

    words: np.ndarray
    ncols: int

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8))
        return cls(pack_bits(arr), arr.shape[1])

    @classmethod
    def from_rows(cls, rows: list[BitVec], ncols: int | None = None) -> BitMatrix:
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty row list")
            ncols = rows[0].length
        for r in rows:
            _check_len(r.length, ncols)
        if rows:
            words = np.stack([r.words for r in rows])
        else:
            words = np.zeros((0, _n_words(ncols)), dtype=np.uint64)
        return cls(words, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(np.zeros((nrows, _n_words(ncols)), dtype=np.uint64), ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @property
    def nrows(self) -> int:
        return self.words.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_array(self) -> np.ndarray:
        return unpack_bits(self.words, self.ncols).reshape(self.nrows, self.ncols)

    def row(self, i: int) -> BitVec:
        return BitVec(self.words[i].copy(), self.ncols)

    def rows(self) -> list[BitVec]:
        return [self.row(i) for i in range(self.nrows)]

    def column(self, j: int) -> np.ndarray:
        return ((self.words[:, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1)).astype(np.uint8)

    def matvec(self, v: BitVec) -> BitVec:
        _check_len(v.length, self.ncols)
        parity = np.bitwise_count(self.words & v.words).sum(axis=1) & 1
        return BitVec.from_bits(parity.astype(np.uint8))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        body = "\n".join("  " + "".join(map(str, r)) for r in self.to_array())
        return f"BitMatrix({self.nrows}x{self.ncols}\n{body})"


def _check_len(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"length mismatch: {a} != {b}")


def _rref_words(words: np.ndarray, ncols: int, col_order=None):
    """In-place reduced row echelon form on packed rows.

    Returns the pivot columns.  Pivot rows end up at the top in pivot order.
    """
    m = words.shape[0]
    pivots: list[int] = []
    row = 0
    cols = range(ncols) if col_order is None else col_order
    for col in cols:
        if row == m:
            break
        wi, bit = col // WORD, np.uint64(1) << np.uint64(col % WORD)
        hits = np.flatnonzero(words[row:, wi] & bit)
        if hits.size == 0:
            continue
        p = row + int(hits[0])
        if p != row:
            words[[row, p]] = words[[p, row]]
        mask = (words[:, wi] & bit).astype(bool)
        mask[row] = False
        words[mask] ^= words[row]
        pivots.append(col)
        row += 1
    return pivots


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int], int]:
    """Reduced row echelon form; lowest-index pivots are taken first."""
    if M.nrows == 0 or M.ncols == 0:
        raise ValueError("rref needs a nonempty matrix")
    words = M.words.copy()
    pivots = _rref_words(words, M.ncols)
    return BitMatrix(words, M.ncols), pivots, len(pivots)


def rank(M: BitMatrix) -> int:
    if M.nrows == 0:
        return 0
    return rref(M)[2]


def _nullspace_from_rref(R: np.ndarray, pivots: list[int], ncols: int) -> np.ndarray:
    """Dense 0/1 basis of the kernel, one vector per free column."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = R[i, f]
    return basis


def nullspace(M: BitMatrix) -> list[BitVec]:
    """Basis of ``{a : M a = 0}``; one vector per non-pivot column."""
    if M.ncols < 1:
        raise ValueError("nullspace needs at least one column")
    if M.nrows == 0:
        return [BitVec.from_bits(r) for r in np.eye(M.ncols, dtype=np.uint8)]
    R, pivots, _ = rref(M)
    dense = R.to_array()
    return [BitVec.from_bits(v) for v in _nullspace_from_rref(dense, pivots, M.ncols)]


def solve(M: BitMatrix, rhs: BitVec) -> BitVec | None:
    """One solution of ``M a = rhs`` (free variables set to 0), or None."""
    _check_len(rhs.length, M.nrows)
    aug = np.concatenate([M.to_array(), rhs.to_bits()[:, None]], axis=1)
    words = pack_bits(aug)
    pivots = _rref_words(words, M.ncols + 1)
    if M.ncols in pivots:
        return None
    R = unpack_bits(words, M.ncols + 1)
    sol = np.zeros(M.ncols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        sol[p] = R[i, M.ncols]
    return BitVec.from_bits(sol)


def constant_row_solutions(M: BitMatrix) -> tuple[list[BitVec], BitVec | None]:
    """Solve ``M a = 0^m`` and ``M a = 1^m`` together.

    Returns a kernel basis and a particular solution of the all-ones system
    (``None`` when inconsistent); every all-ones solution is that particular
    vector plus a kernel element.
    """
    if M.nrows < 2:
        raise ValueError("constant_row_solutions needs at least two rows")
    # Deduplicate first; outcome matrices are tall and highly repetitive.
    words = np.unique(M.words, axis=0)
    reduced = BitMatrix(words, M.ncols)
    zero = nullspace(reduced)
    one = solve(reduced, BitVec.from_bits(np.ones(reduced.nrows, dtype=np.uint8)))
    return zero, one


def in_row_span(M: BitMatrix, v: BitVec) -> bool:
    if M.nrows == 0:
        return v.is_zero()
    return solve(BitMatrix.from_array(M.to_array().T), v) is not None


def symplectic_product(u: BitVec, v: BitVec) -> int:
    """``x_u . z_v + z_u . x_v`` (mod 2) for rows laid out as ``(x | z)``."""
    _check_len(u.length, v.length)
    if u.length % 2:
        raise ValueError("symplectic vectors need even length")
    n = u.length // 2
    ub, vb = u.to_bits(), v.to_bits()
    return int((ub[:n] @ vb[n:] + ub[n:] @ vb[:n]) & 1)


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Dense 0/1 matrix product mod 2 (float BLAS path; exact below 2**24 terms)."""
    A = np.asarray(A, dtype=np.float32)
    B = np.asarray(B, dtype=np.float32)
    return (np.rint(A @ B).astype(np.int64) & 1).astype(np.uint8)


def inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of a square dense 0/1 matrix; raises if singular."""
    A = np.asarray(A, dtype=np.uint8) & 1
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.uint8)], axis=1)
    words = pack_bits(aug)
    pivots = _rref_words(words, 2 * n, col_order=range(n))
    if pivots != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return unpack_bits(words, 2 * n)[:, n:]


def right_inverse(A: np.ndarray) -> np.ndarray:
    """``D`` with ``A @ D = I`` (mod 2) for a full-row-rank ``r x L`` matrix."""
    A = np.asarray(A, dtype=np.uint8) & 1
    r, L = A.shape
    aug = np.concatenate([A, np.eye(r, dtype=np.uint8)], axis=1)
    words = pack_bits(aug)
    pivots = _rref_words(words, L + r, col_order=range(L))
    if len(pivots) != r:
        raise np.linalg.LinAlgError("matrix does not have full row rank")
    E = unpack_bits(words, L + r)[:, L:]
    D = np.zeros((L, r), dtype=np.uint8)
    D[pivots] = E
    return D
