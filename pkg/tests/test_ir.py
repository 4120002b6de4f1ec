import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qforge.errors import ArityError, BoundsError, CapacityError
from qforge.gates import CNOT, CZ, H, RX, RZ, RZZ, U3, X
from qforge.generators import random_circuit
from qforge.ir import (
    Circuit,
    Operation,
    Region,
    circuit_matrix,
    group_interactions,
)

from conftest import circuit_matrix_oracle


def op(gate, *loc, params=()):
    return Operation(gate, tuple(loc), tuple(params))


# --- construction and validation ------------------------------------------

def test_empty_circuit_is_identity():
    c = Circuit(3)
    assert len(c) == 0
    assert np.array_equal(circuit_matrix(c), np.eye(8))


def test_operation_validation():
    with pytest.raises(ArityError):
        op(CNOT, 0)           # two-qubit gate on one qubit
    with pytest.raises(ArityError):
        op(RX, 0, 1)          # one-qubit gate on two qubits
    with pytest.raises(ArityError):
        op(RX, 0)             # missing parameter
    with pytest.raises(ArityError):
        op(X, 0, params=(0.1,))  # unexpected parameter
    with pytest.raises(BoundsError):
        Circuit(2, [op(CNOT, 0, 2)])
    with pytest.raises(ArityError):
        op(RX, -1, params=(0.1,))  # negative index
    with pytest.raises(ArityError):
        op(CNOT, 1, 1)        # repeated qubit


def test_num_qubits_validation():
    with pytest.raises(ValueError):
        Circuit(0)


def test_qubit_capacity_guard():
    wide = Circuit(12, [op(X, q) for q in range(12)])
    with pytest.raises(CapacityError):
        circuit_matrix(wide)
    # explicit larger cap lifts the guard
    assert circuit_matrix(wide, cap=12).shape == (4096, 4096)


# --- immutability and editing ---------------------------------------------

def test_edits_return_new_circuits():
    base = Circuit(2, [op(H, 0)])
    grown = base.append(op(CNOT, 0, 1))
    assert len(base) == 1
    assert len(grown) == 2
    assert base is not grown

    shrunk = grown.remove_op(0)
    assert [o.gate.name for o in shrunk.ops] == ["CNOT"]
    assert [o.gate.name for o in grown.ops] == ["H", "CNOT"]


def test_remove_ops_multiple_indices():
    c = Circuit(2, [op(H, 0), op(X, 1), op(CNOT, 0, 1), op(X, 0)])
    out = c.remove_ops((1, 3))
    assert [o.gate.name for o in out.ops] == ["H", "CNOT"]


def test_remove_out_of_range():
    c = Circuit(2, [op(H, 0)])
    with pytest.raises(BoundsError):
        c.remove_op(5)


def test_insert_op():
    c = Circuit(2, [op(H, 0), op(X, 1)])
    out = c.insert_op(1, op(CNOT, 0, 1))
    assert [o.gate.name for o in out.ops] == ["H", "CNOT", "X"]


def test_replace_region():
    c = Circuit(2, [op(H, 0), op(CNOT, 0, 1), op(CNOT, 0, 1), op(X, 1)])
    out = c.replace_region((1, 3), [op(CZ, 0, 1)])
    assert [o.gate.name for o in out.ops] == ["H", "CZ", "X"]


def test_params_round_trip():
    c = Circuit(2, [op(RX, 0, params=(0.5,)), op(CNOT, 0, 1),
                    op(U3, 1, params=(0.1, 0.2, 0.3))])
    vals = c.params()
    assert list(vals) == [0.5, 0.1, 0.2, 0.3]
    shifted = c.with_params([v + 1 for v in vals])
    assert list(shifted.params()) == [1.5, 1.1, 1.2, 1.3]
    assert list(c.params()) == [0.5, 0.1, 0.2, 0.3]


def test_with_params_wrong_length():
    c = Circuit(1, [op(RX, 0, params=(0.5,))])
    with pytest.raises(ValueError):
        c.with_params([0.1, 0.2])


# --- aggregate queries ----------------------------------------------------

def test_counts_and_depth():
    c = Circuit(3, [op(H, 0), op(CNOT, 0, 1), op(X, 2), op(CZ, 1, 2)])
    assert c.counts() == (2, 2)
    # layers: {H, X} ; {CNOT} ; {CZ}
    assert c.depth() == 3


def test_depth_parallel_gates():
    c = Circuit(4, [op(CNOT, 0, 1), op(CNOT, 2, 3)])
    assert c.depth() == 1


def test_interaction_pairs():
    c = Circuit(3, [op(CNOT, 0, 1), op(CZ, 1, 2), op(CNOT, 1, 0)])
    assert c.interaction_pairs() == frozenset(
        {frozenset({0, 1}), frozenset({1, 2})})


# --- unitary against the reference embedding ------------------------------

def test_matrix_matches_oracle_simple():
    c = Circuit(2, [op(H, 0), op(CNOT, 0, 1)])
    assert np.allclose(circuit_matrix(c), circuit_matrix_oracle(c), atol=1e-12)


def test_matrix_qubit_zero_is_most_significant():
    c = Circuit(2, [op(X, 0)])
    want = np.kron(np.array([[0, 1], [1, 0]]), np.eye(2))
    assert np.allclose(circuit_matrix(c), want)


def test_matrix_reversed_two_qubit_location():
    # CNOT with control on qubit 1, target on qubit 0
    c = Circuit(2, [op(CNOT, 1, 0)])
    want = np.array([
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
    ])
    assert np.allclose(circuit_matrix(c), want)
    assert np.allclose(circuit_matrix(c), circuit_matrix_oracle(c))


def test_matrix_nonadjacent_location():
    c = Circuit(3, [op(RZZ, 0, 2, params=(0.7,))])
    assert np.allclose(circuit_matrix(c), circuit_matrix_oracle(c), atol=1e-12)


@given(seed=st.integers(0, 2**32 - 1),
       num_qubits=st.integers(1, 4),
       num_gates=st.integers(0, 12))
def test_matrix_matches_oracle_random(seed, num_qubits, num_gates):
    c = random_circuit(num_qubits, num_gates, seed=seed)
    assert np.allclose(circuit_matrix(c), circuit_matrix_oracle(c), atol=1e-10)


def test_param_override_matches_with_params(rng):
    c = random_circuit(3, 10, seed=7)
    fresh = rng.uniform(-math.pi, math.pi, size=len(c.params()))
    assert np.allclose(circuit_matrix(c, fresh),
                       circuit_matrix(c.with_params(fresh)))


def test_unitary_wrapper():
    c = Circuit(2, [op(H, 0), op(CNOT, 0, 1)])
    assert np.allclose(c.unitary().matrix, circuit_matrix(c))


# --- interaction regions --------------------------------------------------

def test_group_interactions_single_region():
    # a region opens at the first two-qubit op; later one-qubit ops on the
    # same qubits extend it
    c = Circuit(2, [op(H, 0), op(CNOT, 0, 1), op(X, 1)])
    regions = group_interactions(c)
    assert len(regions) == 1
    r = regions[0]
    assert set(r.qubits) == {0, 1}
    assert r.span == (1, 3)
    assert list(r.indices) == [1, 2]


def test_group_interactions_splits_on_new_pair():
    c = Circuit(3, [op(CNOT, 0, 1), op(CNOT, 1, 2)])
    regions = group_interactions(c)
    assert len(regions) == 2
    assert set(regions[0].qubits) == {0, 1}
    assert set(regions[1].qubits) == {1, 2}


def test_group_interactions_interleaved_disjoint_pairs():
    c = Circuit(4, [op(CNOT, 0, 1), op(CNOT, 2, 3), op(CNOT, 0, 1)])
    regions = group_interactions(c)
    pair_sets = [set(r.qubits) for r in regions]
    assert {0, 1} in pair_sets and {2, 3} in pair_sets
    # every two-qubit op lands in exactly one region
    all_indices = sorted(i for r in regions for i in r.indices
                         if c.ops[i].gate.arity == 2)
    assert all_indices == [0, 1, 2]


def test_region_indices_and_span():
    r = Region(2, 5, (0, 1))
    assert r.span == (2, 5)
    assert list(r.indices) == [2, 3, 4]
