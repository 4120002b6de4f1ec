"""Deterministic circuit generators for experiments and tests."""

from __future__ import annotations

import numpy as np

from .gates import CNOT, CZ, H, RX, RY, RZ, RXX, RZZ, SX, U3, X, Gate
from .ir import Circuit, Operation

__all__ = [
    "cnot_ladder",
    "generic_two_qubit_circuit",
    "insert_inverse_pairs",
    "inverse_operation",
    "random_circuit",
    "tfim_trotter",
]

DEFAULT_ONE_QUBIT_POOL = (U3, RX, RY, RZ, H, X, SX)
DEFAULT_TWO_QUBIT_POOL = (CNOT, CZ, RZZ, RXX)

# Gates whose inverse stays inside the library: parameterized rotations
# invert by negating angles, and these fixed gates are involutions.
_SELF_INVERSE = ("X", "H", "CNOT", "CZ")
INVERTIBLE_PAIR_POOL = (U3, RX, RY, RZ, RZZ, RXX, X, H, CNOT, CZ)


def _random_params(gate: Gate, rng) -> tuple[float, ...]:
    return tuple(rng.uniform(-np.pi, np.pi, gate.num_params))


def random_circuit(
    num_qubits: int,
    num_gates: int,
    seed: int,
    one_qubit_gates=DEFAULT_ONE_QUBIT_POOL,
    two_qubit_gates=DEFAULT_TWO_QUBIT_POOL,
    two_qubit_fraction: float = 0.3,
) -> Circuit:
    """Uniformly random ops over the given pools with random angles."""
    if num_qubits < 2 and two_qubit_fraction > 0:
        two_qubit_fraction = 0.0
    rng = np.random.default_rng(seed)
    ops = []
    for _ in range(num_gates):
        if two_qubit_gates and rng.random() < two_qubit_fraction:
            gate = two_qubit_gates[rng.integers(len(two_qubit_gates))]
            loc = tuple(rng.choice(num_qubits, size=2, replace=False))
        else:
            gate = one_qubit_gates[rng.integers(len(one_qubit_gates))]
            loc = (int(rng.integers(num_qubits)),)
        ops.append(Operation(gate, loc, _random_params(gate, rng)))
    return Circuit(num_qubits, ops)


def inverse_operation(op: Operation) -> Operation:
    """The library op implementing the exact inverse, entry for entry."""
    name = op.gate.name
    if name in _SELF_INVERSE:
        return op
    if name == "U3":
        t, p, l = op.params
        return Operation(op.gate, op.location, (-t, -l, -p))
    if name in ("RX", "RY", "RZ", "RZZ", "RXX"):
        return Operation(op.gate, op.location, (-op.params[0],))
    raise ValueError(f"no in-library inverse for gate {name}")


def insert_inverse_pairs(
    circuit: Circuit,
    num_pairs: int,
    seed: int,
    pool=INVERTIBLE_PAIR_POOL,
) -> Circuit:
    """Seed redundancy: insert adjacent (g, g^-1) pairs at random places.

    Insertion points are drawn against the original circuit and applied
    back to front, so no pair is ever planted between the members of
    another. Every pair therefore stays adjacent — its product is exactly
    identity and any greedy qubit partition keeps both members in one
    block, which is what makes the planted redundancy recoverable.
    """
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(num_pairs):
        gate = pool[rng.integers(len(pool))]
        if gate.arity == 2:
            loc = tuple(rng.choice(circuit.num_qubits, size=2, replace=False))
        else:
            loc = (int(rng.integers(circuit.num_qubits)),)
        op = Operation(gate, loc, _random_params(gate, rng))
        at = int(rng.integers(len(circuit) + 1))
        pairs.append((at, op))
    work = circuit
    # stable sort keeps same-index pairs in draw order; descending insertion
    # leaves earlier indices untouched
    for at, op in sorted(pairs, key=lambda item: item[0], reverse=True):
        work = work.insert_op(at, inverse_operation(op)).insert_op(at, op)
    return work


def cnot_ladder(num_qubits: int) -> Circuit:
    ops = [
        Operation(CNOT, (i, i + 1), ()) for i in range(num_qubits - 1)
    ]
    return Circuit(num_qubits, ops)


def generic_two_qubit_circuit(seed: int) -> Circuit:
    """A two-qubit circuit realizing a generic SU(4) element.

    Three CNOTs interleaved with fully parameterized single-qubit layers;
    random angles put the unitary in general position.
    """
    rng = np.random.default_rng(seed)
    ops = []
    for layer in range(4):
        ops.append(Operation(U3, (0,), tuple(rng.uniform(-np.pi, np.pi, 3))))
        ops.append(Operation(U3, (1,), tuple(rng.uniform(-np.pi, np.pi, 3))))
        if layer < 3:
            ops.append(Operation(CNOT, (0, 1), ()))
    return Circuit(2, ops)


def tfim_trotter(
    num_qubits: int, steps: int, dt: float = 0.2
) -> Circuit:
    """Trotterized transverse-field Ising evolution on a line.

    Per step: RZZ(2 J_i dt) on each neighboring pair, then RX(2 h_i dt) on
    each qubit. Site-dependent coefficients are fixed and generic, except
    that every fourth coupling and every fifth field is exactly zero, so
    the circuit carries known removable gates.
    """
    couplings = [
        0.0 if i % 4 == 2 else 0.9 + 0.05 * i for i in range(num_qubits - 1)
    ]
    fields = [
        0.0 if i % 5 == 3 else 0.4 + 0.03 * i for i in range(num_qubits)
    ]
    ops = []
    for _ in range(steps):
        for i, j in enumerate(couplings):
            ops.append(Operation(RZZ, (i, i + 1), (2.0 * j * dt,)))
        for i, h in enumerate(fields):
            ops.append(Operation(RX, (i,), (2.0 * h * dt,)))
    return Circuit(num_qubits, ops)
