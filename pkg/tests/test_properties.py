"""Property suites on the dense oracle (n <= 6)."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tdoped import denseoracle as do
from tdoped.hybridsim import embed_and_apply
from tdoped.pauli import PauliOp, StabilizerGroup, encoding_circuit, pauli_commutes, random_stabilizer_group

seeds = st.integers(0, 2**32 - 1)


def random_pauli(n, rng):
    while True:
        s = "".join(rng.choice(list("IXYZ"), size=n))
        if set(s) != {"I"}:
            return PauliOp.from_string(("-" if rng.random() < 0.5 else "+") + s)


def near_eigenstate(g, rng, spread):
    n = g.n
    psi = do.random_state(n, rng).amplitudes
    base = do.project(psi, g)
    v = base / np.linalg.norm(base) + spread * do.random_state(n, rng).amplitudes
    return do.DenseState(n, v / np.linalg.norm(v))


@given(seeds, st.integers(1, 6), st.floats(0.0, 0.5))
@settings(max_examples=200, deadline=None)
def test_gentle_measurement(seed, n, spread):
    rng = np.random.default_rng(seed)
    g = random_pauli(n, rng)
    psi = near_eigenstate(g, rng, spread)
    w = do.project(psi.amplitudes, g)
    p = float(np.real(np.vdot(w, w)))
    eps = max(0.0, 1 - p)
    post = do.DenseState(n, w / np.linalg.norm(w))
    assert do.trace_distance_pure(psi, post) <= 2 * math.sqrt(eps) + 1e-9


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_high_expectations_imply_commuting(seed):
    rng = np.random.default_rng(seed)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        g = random_pauli(n, rng)
        h = random_pauli(n, rng)
        # Bias towards hard cases: a state close to the +1 space of g.
        psi = near_eigenstate(g, rng, float(rng.uniform(0, 0.3)))
        pg = (1 + do.pauli_expectation(psi, g)) / 2
        ph = (1 + do.pauli_expectation(psi, h)) / 2
        if pg >= 0.99 and ph >= 0.99:
            assert pauli_commutes(g, h)


def code_overlap_by_basis(psi, S):
    """Squared norm of the projection of ``psi`` onto C(S), from an explicit code basis."""
    n, r = S.n, S.rank
    V = encoding_circuit(S)
    total = 0.0
    for k in range(2 ** (n - r)):
        e = np.zeros(2 ** (n - r), dtype=complex)
        e[k] = 1
        total += abs(np.vdot(embed_and_apply(V, r, e), psi.amplitudes)) ** 2
    return total


@given(seeds, st.integers(1, 5), st.floats(0.01, 0.9))
@settings(max_examples=200, deadline=None)
def test_code_weight_bound(seed, n, eps):
    rng = np.random.default_rng(seed)
    T = random_stabilizer_group(n, rng)
    r = int(rng.integers(1, n + 1))
    S = StabilizerGroup(n, T.generators[:r])
    psi = near_eigenstate(S.generators[0], rng, float(rng.uniform(0, 1)))
    w = code_overlap_by_basis(psi, S)
    assert abs(w - do.code_space_weight(psi, S)) < 1e-9
    # Probability of the all-zero outcome when measuring the generators.
    pats, probs = do.outcome_distribution(psi, S.generators)
    p0 = sum(q for p, q in zip(pats.tolist(), probs) if not any(p))
    assert abs(p0 - w) < 1e-9
    if do.distance_to_code(psi, S) > eps:
        assert w < 1 - eps**2
