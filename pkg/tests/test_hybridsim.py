import math

import numpy as np
import pytest

from tdoped import denseoracle as do
from tdoped.circuit import Circuit, random_doped_circuit
from tdoped.errors import CapacityError
from tdoped.hybridsim import HybridState, prepare
from tdoped.pauli import PauliOp, StabilizerGroup, random_stabilizer_group


def overlap(circuit):
    h = prepare(circuit)
    truth = do.simulate_circuit(circuit)
    return abs(np.vdot(truth.amplitudes, h.to_dense())), h


def test_stabilizer_circuit_stays_frozen(rng):
    c = random_doped_circuit(6, 0, 40, rng)
    ov, h = overlap(c)
    assert ov == pytest.approx(1, abs=1e-9)
    assert h.r == 6 and h.k == 0


@pytest.mark.parametrize("seed", range(8))
def test_doped_circuits_match_oracle(seed):
    rng = np.random.default_rng(seed)
    c = random_doped_circuit(5, 3, 30, rng)
    c.append("RZ", 1, 0.37)
    ov, h = overlap(c)
    assert ov == pytest.approx(1, abs=1e-9)
    assert h.k <= 4


def test_t_on_zero_is_trivial():
    h = prepare(Circuit(2, [("T", 0)]))
    assert h.r == 2


def test_frozen_count_lower_bound(rng):
    for _ in range(10):
        c = random_doped_circuit(6, 2, 20, rng)
        assert prepare(c).r >= 6 - 2 * 2


def test_dense_cap_enforced():
    c = Circuit(3, [("H", q) for q in range(3)] + [("T", q) for q in range(3)])
    with pytest.raises(CapacityError):
        prepare(c, dense_cap=2)


def test_probability_zero_matches_oracle(rng):
    c = random_doped_circuit(4, 2, 25, rng)
    h = prepare(c)
    truth = do.simulate_circuit(c)
    for _ in range(20):
        g = PauliOp.from_string("".join(rng.choice(list("IXYZ"), size=4)))
        assert h.probability_zero(g) == pytest.approx((1 + do.pauli_expectation(truth, g)) / 2, abs=1e-9)


def test_measurement_collapses(rng):
    h = prepare(Circuit(1, [("H", 0), ("T", 0)]))
    b = h.measure_pauli(PauliOp.from_string("Z"), rng)
    assert h.probability_zero(PauliOp.from_string("Z")) == pytest.approx(1 - b)


def test_sampler_law_matches_oracle(rng):
    c = random_doped_circuit(4, 2, 25, rng)
    h = prepare(c)
    T = random_stabilizer_group(4, rng)
    pats, probs = do.outcome_distribution(do.simulate_circuit(c), T.generators)
    law = {tuple(p): q for p, q in zip(pats.tolist(), probs)}
    shots = 20000
    got_p, got_c = h.sampler(T.generators).counts(shots, rng)
    got = {tuple(p): c for p, c in zip(got_p.tolist(), got_c)}
    assert set(got) <= set(law)
    for key, q in law.items():
        sigma = math.sqrt(q * (1 - q) / shots) + 1e-12
        assert abs(got.get(key, 0) / shots - q) < 5 * sigma


def test_counts_handle_huge_shot_numbers(rng):
    h = prepare(Circuit(3, [("H", 0), ("T", 0), ("CNOT", 0, 1)]))
    pats, cnts = h.sampler([PauliOp.from_string("ZZI"), PauliOp.from_string("IIZ")]).counts(10**13, rng)
    assert cnts.sum() == 10**13
    assert pats.tolist() == [[0, 0]]


def test_residual_extract_reconstructs_state(rng):
    c = random_doped_circuit(5, 2, 30, rng)
    h = prepare(c)
    V, r, phi = h.residual_extract()
    assert phi.size == 2 ** (5 - r)
    code = StabilizerGroup(5, [V.z_image(j) for j in range(r)])
    assert do.distance_to_code(do.simulate_circuit(c), code) < 1e-7


def test_copy_is_independent(rng):
    h = HybridState(2).run(Circuit(2, [("H", 0), ("T", 0)]))
    h2 = h.copy()
    h2.measure_pauli(PauliOp.from_string("ZI"), rng)
    assert h.probability_zero(PauliOp.from_string("ZI")) == pytest.approx(0.5)
