import numpy as np
import pytest

from tdoped.circuit import Circuit, layered_doped_circuit, random_doped_circuit
from tdoped.errors import CircuitParseError


def test_text_round_trip(rng):
    c = random_doped_circuit(5, 3, 30, rng)
    c.append("RZ", 2, 0.3)
    back = Circuit.from_text(c.to_text(), n=5)
    assert back.gates[:-1] == c.gates[:-1]
    assert back.gates[-1][2] == pytest.approx(0.3)
    assert back.doped_count == 4


def test_exact_t_count(rng):
    c = random_doped_circuit(4, 2, 10, rng)
    assert sum(g[0] == "T" for g in c.gates) == 2
    assert sum(g[0] != "T" for g in c.gates) == 10
    with pytest.raises(ValueError):
        random_doped_circuit(4, 5, 3, rng)


def test_layered_circuit_has_t_magic(rng):
    c = layered_doped_circuit(6, 2, 30, rng)
    assert c.doped_count == 2
    assert len(c.gates) == 34


@pytest.mark.parametrize("text,lineno", [
    ("H 0\nFOO 1\n", 2),
    ("H 0\n\nCNOT 1 1\n", 3),
    ("RZ 0 abc\n", 1),
    ("H x\n", 1),
    ("CNOT 0\n", 1),
    ("# c\nH 9\n", 2),
])
def test_parse_errors_cite_line(text, lineno):
    with pytest.raises(CircuitParseError) as info:
        Circuit.from_text(text, n=4)
    assert f"line {lineno}" in str(info.value)


def test_rz_quarter_turns_are_clifford():
    c = Circuit(1, [("RZ", 0, np.pi / 2), ("RZ", 0, np.pi), ("RZ", 0, 0.1)])
    assert c.doped_count == 1
