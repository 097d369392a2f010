import itertools

import numpy as np
import pytest

from etrforge.circuits import BoolCircuit, CircuitBuilder, constant_circuit
from etrforge.fixtures import random_circuit


def test_builder_folds_constants_and_shares():
    b = CircuitBuilder(2)
    x, y = b.inputs()
    assert b.and_(x, b.const(1)) == x
    assert b.or_(x, b.const(1)) == b.const(1)
    assert b.and_(x, y) == b.and_(y, x)
    assert b.not_(b.not_(x)) == x


def test_vectorized_matches_scalar(rng):
    for _ in range(30):
        c = random_circuit(rng, 4, 3, 10)
        table = c.evaluate_all()
        for i, bits in enumerate(itertools.product((0, 1), repeat=4)):
            assert table[i].astype(int).tolist() == c.evaluate(bits)
            values = c.gate_values(bits)
            assert [values[o] for o in c.outputs] == c.evaluate(bits)


def test_equality_and_mux():
    b = CircuitBuilder(4)
    w = b.inputs()
    out = [b.equals(w[:2], w[2:]), b.mux(w[0], w[1], w[2]), b.equals_const(w, 5)]
    c = b.build(out)
    for bits in itertools.product((0, 1), repeat=4):
        eq, mux, five = c.evaluate(bits)
        assert eq == int(bits[:2] == bits[2:])
        assert mux == (bits[1] if bits[0] else bits[2])
        assert five == int(bits == (0, 1, 0, 1))


def test_constant_circuit_table():
    table = [[1, 0], [0, 1], [1, 1], [0, 0]]
    c = constant_circuit(2, table)
    assert np.array_equal(c.evaluate_all().astype(int), np.array(table))


def test_rejects_forward_references():
    with pytest.raises(ValueError):
        BoolCircuit(1, (("NOT", (1,)), ("INPUT", (0,))), (0,))
    with pytest.raises(ValueError):
        BoolCircuit(1, (("XOR", (0, 0)),), (0,))
