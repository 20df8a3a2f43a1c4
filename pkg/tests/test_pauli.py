import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdoped import denseoracle
from tdoped.circuit import random_clifford_gates
from tdoped.pauli import (
    CliffordTableau,
    PauliError,
    PauliOp,
    StabilizerGroup,
    add_if_independent,
    encoding_circuit,
    pauli_commutes,
    random_stabilizer_group,
    tableau_compose,
    tableau_from_gates,
    tableau_inverse,
    tableau_to_gates,
)

pauli_strings = st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.sampled_from(["+", "-", "+i", "-i"]), st.text("IXYZ", min_size=n, max_size=n))
).map(lambda t: t[0] + t[1])


def unitary(n, gates):
    cols = []
    for k in range(2**n):
        e = np.zeros(2**n, dtype=complex)
        e[k] = 1
        cols.append(denseoracle.apply_gates(e, n, gates))
    return np.stack(cols, axis=1)


@given(pauli_strings, pauli_strings)
@settings(max_examples=200, deadline=None)
def test_product_matches_matrices(a, b):
    g, h = PauliOp.from_string(a), PauliOp.from_string(b)
    if g.n != h.n:
        with pytest.raises(PauliError):
            g * h
        return
    assert np.allclose((g * h).to_matrix(), g.to_matrix() @ h.to_matrix())
    G, H = g.to_matrix(), h.to_matrix()
    assert pauli_commutes(g, h) == np.allclose(G @ H, H @ G)


@given(pauli_strings)
def test_string_round_trip(s):
    g = PauliOp.from_string(s)
    assert PauliOp.from_string(str(g)) == g
    assert g.is_hermitian() == np.allclose(g.to_matrix(), g.to_matrix().conj().T)


def test_letters():
    y = PauliOp.from_string("Y")
    assert np.allclose(y.to_matrix(), [[0, -1j], [1j, 0]])
    assert str(-PauliOp.from_string("XZ")) == "-XZ"
    assert str(PauliOp.single(3, 1, "Y", negative=True)) == "-IYI"
    with pytest.raises(PauliError):
        PauliOp.from_string("XQ")


def test_tableau_conjugation_matches_dense(rng):
    for n in (1, 2, 3):
        for _ in range(10):
            gates = random_clifford_gates(n, 12, rng) + [("CZ", 0, n - 1)] * (n > 1) + [("SDG", 0)]
            t = tableau_from_gates(n, gates)
            assert t.is_valid()
            U = unitary(n, gates)
            for _ in range(5):
                s = "".join(rng.choice(list("IXYZ"), size=n))
                g = PauliOp.from_string(s)
                assert np.allclose(t.conjugate(g).to_matrix(), U @ g.to_matrix() @ U.conj().T)


def test_inverse_compose_and_synthesis(rng):
    n = 5
    a = tableau_from_gates(n, random_clifford_gates(n, 40, rng))
    b = tableau_from_gates(n, random_clifford_gates(n, 40, rng))
    assert tableau_compose(a, tableau_inverse(a)) == CliffordTableau.identity(n)
    assert tableau_from_gates(n, tableau_to_gates(a)) == a
    g = PauliOp.from_string("XYZIZ")
    assert tableau_compose(a, b).conjugate(g) == a.conjugate(b.conjugate(g))


def test_prepend_gate_is_right_multiplication(rng):
    n = 3
    gates = random_clifford_gates(n, 15, rng)
    t = tableau_from_gates(n, gates)
    t2 = t.copy()
    t2.prepend_gate(("H", 1))
    assert t2 == tableau_from_gates(n, [("H", 1)] + gates)
    with pytest.raises(IndexError):
        t2.apply_gate(("H", 3))


def test_random_group_is_valid_and_uniform_at_n2():
    rng = np.random.default_rng(5)
    seen = {}
    trials = 6000
    for _ in range(trials):
        T = random_stabilizer_group(2, rng)
        assert T.is_valid() and T.rank == 2
        key = frozenset(tuple(row) for row in _span_rows(T.symplectic_matrix()))
        seen[key] = seen.get(key, 0) + 1
    assert len(seen) == 15
    expected = trials / 15
    chi2 = sum((c - expected) ** 2 / expected for c in seen.values())
    assert chi2 < 40  # 14 dof; p ~ 3e-4


def _span_rows(M):
    out = {tuple([0] * M.shape[1])}
    for v in M:
        out |= {tuple((np.array(u) + v) % 2) for u in out}
    return out


def test_group_invariants_enforced():
    with pytest.raises(PauliError):
        StabilizerGroup.from_strings(["XI", "ZI"]).check()
    with pytest.raises(PauliError):
        StabilizerGroup.from_strings(["ZZ", "ZZ"]).check()
    with pytest.raises(PauliError):
        StabilizerGroup(1, [PauliOp.from_string("+iZ")]).check()
    R, added = add_if_independent(StabilizerGroup.from_strings(["ZZ"]), PauliOp.from_string("-ZZ"))
    assert not added and R.rank == 1
    with pytest.raises(PauliError):
        add_if_independent(R, PauliOp.from_string("XI"))


def test_element_uses_ordered_products():
    S = StabilizerGroup.from_strings(["XX", "ZZ"])
    assert str(S.element([1, 1])) == "-YY"


@pytest.mark.parametrize("n,r", [(1, 1), (3, 2), (4, 4), (6, 3)])
def test_encoding_circuit_images(rng, n, r):
    S = random_stabilizer_group(n, rng)
    S = StabilizerGroup(n, S.generators[:r])
    V = encoding_circuit(S)
    assert V.is_valid()
    for j, g in enumerate(S.generators):
        assert V.z_image(j) == g
    if n <= 4:
        # V|0^r, phi> lies in the code space for a random phi.
        from tdoped.hybridsim import embed_and_apply
        phi = rng.normal(size=2 ** (n - r)) + 0j
        psi = denseoracle.DenseState(n, embed_and_apply(V, r, phi / np.linalg.norm(phi)))
        assert denseoracle.code_space_weight(psi, S) == pytest.approx(1.0)
