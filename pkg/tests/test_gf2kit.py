import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tdoped import gf2kit
from tdoped.gf2kit import BitMatrix, BitVec


def brute_kernel(A):
    m, n = A.shape
    return {a for a in itertools.product((0, 1), repeat=n) if not ((A @ np.array(a)) % 2).any()}


def span(vectors, n):
    out = {tuple([0] * n)}
    for v in vectors:
        out |= {tuple((np.array(u) + v) % 2) for u in out}
    return out


small_matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 7).flatmap(lambda n: arrays(np.uint8, (m, n), elements=st.integers(0, 1)))
)


def test_pack_round_trip_across_word_boundary(rng):
    bits = rng.integers(0, 2, size=(5, 130), dtype=np.uint8)
    words = gf2kit.pack_bits(bits)
    assert words.shape == (5, 3)
    assert np.array_equal(gf2kit.unpack_bits(words, 130), bits)


def test_bitvec_basics():
    v = BitVec.from_bits([1, 0, 1, 1])
    w = BitVec.from_bits([0, 1, 1, 0])
    assert v.weight() == 3
    assert (v ^ w).to_bits().tolist() == [1, 1, 0, 1]
    assert v.dot(w) == 1
    assert v[0] == 1 and v[1] == 0
    with pytest.raises(IndexError):
        v[4]
    with pytest.raises(ValueError):
        v ^ BitVec.zeros(5)
    assert BitVec.zeros(70).is_zero()
    assert hash(v) == hash(BitVec.from_bits([1, 0, 1, 1]))


def test_rref_identity_and_zero():
    R, piv, r = gf2kit.rref(BitMatrix.identity(5))
    assert piv == list(range(5)) and r == 5
    _, piv, r = gf2kit.rref(BitMatrix.zeros(3, 4))
    assert piv == [] and r == 0
    with pytest.raises(ValueError):
        gf2kit.rref(BitMatrix.zeros(0, 3))


def test_rref_wide_matrix_crosses_words(rng):
    A = rng.integers(0, 2, size=(40, 200), dtype=np.uint8)
    R, piv, r = gf2kit.rref(BitMatrix.from_array(A))
    assert r == gf2kit.rank(BitMatrix.from_array(A.T))
    Ra = R.to_array()
    assert np.array_equal(Ra[:r, piv], np.eye(r, dtype=np.uint8))
    assert not Ra[r:].any()


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_nullspace_matches_enumeration(A):
    basis = gf2kit.nullspace(BitMatrix.from_array(A))
    assert span([v.to_bits() for v in basis], A.shape[1]) == brute_kernel(A)


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_rank_is_row_space_dimension(A):
    rows = span(list(A), A.shape[1])
    assert len(rows) == 2 ** gf2kit.rank(BitMatrix.from_array(A))


@given(small_matrices, st.data())
@settings(max_examples=100, deadline=None)
def test_solve_agrees_with_enumeration(A, data):
    b = np.array(data.draw(st.lists(st.integers(0, 1), min_size=A.shape[0], max_size=A.shape[0])), np.uint8)
    sol = gf2kit.solve(BitMatrix.from_array(A), BitVec.from_bits(b))
    feasible = any(np.array_equal((A @ np.array(a)) % 2, b)
                   for a in itertools.product((0, 1), repeat=A.shape[1]))
    if sol is None:
        assert not feasible
    else:
        assert np.array_equal((A @ sol.to_bits()) % 2, b)


def test_constant_row_solutions_example():
    B = BitMatrix.from_array([[1, 1, 0], [0, 0, 1], [1, 1, 1]])
    zero, one = gf2kit.constant_row_solutions(B)
    assert [v.to_bits().tolist() for v in zero] == [[1, 1, 0]]
    assert one is None
    B = BitMatrix.from_array([[1, 0], [0, 1], [1, 0]])
    zero, one = gf2kit.constant_row_solutions(B)
    assert zero == [] and one.to_bits().tolist() == [1, 1]
    with pytest.raises(ValueError):
        gf2kit.constant_row_solutions(BitMatrix.from_array([[1, 0]]))


def test_in_row_span_and_symplectic():
    M = BitMatrix.from_array([[1, 0, 1], [0, 1, 1]])
    assert gf2kit.in_row_span(M, BitVec.from_bits([1, 1, 0]))
    assert not gf2kit.in_row_span(M, BitVec.from_bits([0, 0, 1]))
    x1 = BitVec.from_bits([1, 0])  # X on one qubit
    z1 = BitVec.from_bits([0, 1])
    assert gf2kit.symplectic_product(x1, z1) == 1
    assert gf2kit.symplectic_product(x1, x1) == 0
    with pytest.raises(ValueError):
        gf2kit.symplectic_product(BitVec.from_bits([1, 0, 1]), BitVec.from_bits([1, 0, 1]))


def test_inverse_and_right_inverse(rng):
    while True:
        A = rng.integers(0, 2, size=(9, 9), dtype=np.uint8)
        if gf2kit.rank(BitMatrix.from_array(A)) == 9:
            break
    assert np.array_equal(gf2kit.matmul(A, gf2kit.inverse(A)), np.eye(9, dtype=np.uint8))
    W = rng.integers(0, 2, size=(4, 11), dtype=np.uint8)
    W[:, :4] = np.eye(4, dtype=np.uint8)
    assert np.array_equal(gf2kit.matmul(W, gf2kit.right_inverse(W)), np.eye(4, dtype=np.uint8))
    with pytest.raises(np.linalg.LinAlgError):
        gf2kit.inverse(np.ones((3, 3), dtype=np.uint8))
