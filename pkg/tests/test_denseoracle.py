import math

import numpy as np
import pytest

from tdoped import denseoracle as do
from tdoped.circuit import Circuit
from tdoped.errors import CapacityError
from tdoped.pauli import PauliOp, StabilizerGroup


def test_bell_state_expectations():
    psi = do.simulate_circuit(Circuit(2, [("H", 0), ("CNOT", 0, 1)]))
    assert do.pauli_expectation(psi, PauliOp.from_string("XX")) == pytest.approx(1)
    assert do.pauli_expectation(psi, PauliOp.from_string("ZZ")) == pytest.approx(1)
    assert do.pauli_expectation(psi, PauliOp.from_string("YY")) == pytest.approx(-1)
    assert do.pauli_expectation(psi, PauliOp.from_string("ZI")) == pytest.approx(0)


def test_qubit_zero_is_most_significant():
    psi = do.simulate_circuit(Circuit(3, [("X", 0)]))
    assert abs(psi.amplitudes[4]) == pytest.approx(1)


def test_apply_pauli_matches_matrix(rng):
    psi = do.random_state(3, rng)
    for s in ("XYZ", "-iZZX", "+IYI"):
        g = PauliOp.from_string(s)
        assert np.allclose(do.apply_pauli(psi.amplitudes, g), g.to_matrix() @ psi.amplitudes)


def test_t_state_distance():
    plus_t = do.simulate_circuit(Circuit(1, [("H", 0), ("T", 0)]))
    zero = do.DenseState.zero(1)
    assert do.trace_distance_pure(plus_t, zero) == pytest.approx(math.sqrt(0.5))
    assert do.pauli_expectation(plus_t, PauliOp.from_string("X")) == pytest.approx(math.sqrt(0.5))


def test_rz_matches_t_up_to_phase():
    a = do.simulate_circuit(Circuit(1, [("H", 0), ("T", 0)]))
    b = do.simulate_circuit(Circuit(1, [("H", 0), ("RZ", 0, math.pi / 4)]))
    assert do.trace_distance_pure(a, b) < 1e-7


def test_outcome_distribution_bell():
    psi = do.simulate_circuit(Circuit(2, [("H", 0), ("CNOT", 0, 1)]))
    pats, probs = do.outcome_distribution(psi, [PauliOp.from_string("ZI"), PauliOp.from_string("IZ")])
    assert sorted(map(tuple, pats.tolist())) == [(0, 0), (1, 1)]
    assert np.allclose(probs, 0.5)


def test_code_distance_and_stabilizer_state(rng):
    S = StabilizerGroup.from_strings(["XX", "ZZ"])
    psi = do.stabilizer_state(S)
    assert do.distance_to_code(psi, S) < 1e-7
    assert do.distance_to_code(do.DenseState.zero(2), S) == pytest.approx(math.sqrt(0.5))


def test_cap():
    with pytest.raises(CapacityError):
        do.simulate_circuit(Circuit(5, []), cap=4)
