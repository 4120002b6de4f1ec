"""Circuit IR: operations, immutable circuits, evaluation, interaction regions.

Circuits are values. Every edit returns a new circuit and leaves the original
untouched. Semantics are left to right: ops[0] is applied first, so the circuit
unitary is U(ops[-1]) @ ... @ U(ops[0]). Qubit 0 is the most significant bit of
the basis-state index (see unitary.py).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ArityError, BoundsError, CapacityError, ShapeError
from .gates import Gate
from .unitary import UnitaryMatrix

# Largest qubit count for which a dense unitary is materialized by default.
DEFAULT_QUBIT_CAP = 10


@dataclass(frozen=True)
class Operation:
    """One gate applied at a qubit location with concrete parameter values."""

    gate: Gate
    location: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "location", tuple(self.location))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.location) != self.gate.arity:
            raise ArityError(
                f"{self.gate.name} acts on {self.gate.arity} qubits, "
                f"got location {self.location}"
            )
        if len(set(self.location)) != len(self.location):
            raise ArityError(f"repeated qubit in location {self.location}")
        if any(q < 0 for q in self.location):
            raise ArityError(f"negative qubit index in location {self.location}")
        if len(self.params) != self.gate.num_params:
            raise ArityError(
                f"{self.gate.name} takes {self.gate.num_params} parameters, "
                f"got {len(self.params)}"
            )

    def matrix(self) -> np.ndarray:
        return self.gate.matrix(self.params)


class Circuit:
    """An immutable ordered list of operations on a fixed qubit count."""

    __slots__ = ("_num_qubits", "_ops", "_num_params")

    def __init__(self, num_qubits: int, ops: Iterable[Operation] = ()):
        ops = tuple(ops)
        if num_qubits < 1:
            raise ShapeError(f"num_qubits must be positive, got {num_qubits}")
        for op in ops:
            if max(op.location) >= num_qubits:
                raise BoundsError(
                    f"operation on {op.location} exceeds qubit count {num_qubits}"
                )
        self._num_qubits = int(num_qubits)
        self._ops = ops
        self._num_params = sum(op.gate.num_params for op in ops)

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def ops(self) -> tuple[Operation, ...]:
        return self._ops

    @property
    def num_params(self) -> int:
        return self._num_params

    def __len__(self) -> int:
        return len(self._ops)

    def __iter__(self) -> Iterator[Operation]:
        return iter(self._ops)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self._num_qubits == other._num_qubits and self._ops == other._ops

    def __hash__(self) -> int:
        return hash((self._num_qubits, self._ops))

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self._num_qubits}, ops={len(self._ops)})"

    # -- parameter vector ---------------------------------------------------

    def params(self) -> np.ndarray:
        """All op parameters flattened into one real vector, in op order."""
        out = np.empty(self._num_params, dtype=np.float64)
        i = 0
        for op in self._ops:
            n = op.gate.num_params
            if n:
                out[i : i + n] = op.params
                i += n
        return out

    def with_params(self, values: Sequence[float]) -> "Circuit":
        """Scatter a flat parameter vector back onto the ops."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self._num_params,):
            raise ShapeError(
                f"expected {self._num_params} parameters, got {values.shape}"
            )
        ops = []
        i = 0
        for op in self._ops:
            n = op.gate.num_params
            if n:
                ops.append(
                    Operation(op.gate, op.location, tuple(values[i : i + n]))
                )
                i += n
            else:
                ops.append(op)
        return Circuit(self._num_qubits, ops)

    # -- edits --------------------------------------------------------------

    def append(self, op: Operation) -> "Circuit":
        return Circuit(self._num_qubits, self._ops + (op,))

    def extend(self, ops: Iterable[Operation]) -> "Circuit":
        return Circuit(self._num_qubits, self._ops + tuple(ops))

    def remove_op(self, index: int) -> "Circuit":
        if not 0 <= index < len(self._ops):
            raise BoundsError(f"op index {index} out of range [0, {len(self._ops)})")
        return Circuit(self._num_qubits, self._ops[:index] + self._ops[index + 1 :])

    def remove_ops(self, indices: Iterable[int]) -> "Circuit":
        drop = set(indices)
        for i in drop:
            if not 0 <= i < len(self._ops):
                raise BoundsError(f"op index {i} out of range [0, {len(self._ops)})")
        return Circuit(
            self._num_qubits,
            tuple(op for i, op in enumerate(self._ops) if i not in drop),
        )

    def insert_op(self, index: int, op: Operation) -> "Circuit":
        if not 0 <= index <= len(self._ops):
            raise BoundsError(f"insert index {index} out of range [0, {len(self._ops)}]")
        return Circuit(
            self._num_qubits, self._ops[:index] + (op,) + self._ops[index:]
        )

    def replace_region(
        self, span: tuple[int, int], ops: Iterable[Operation]
    ) -> "Circuit":
        start, stop = span
        if not 0 <= start <= stop <= len(self._ops):
            raise BoundsError(
                f"span {span} out of range for {len(self._ops)} ops"
            )
        return Circuit(
            self._num_qubits, self._ops[:start] + tuple(ops) + self._ops[stop:]
        )

    # -- queries ------------------------------------------------------------

    def counts(self) -> tuple[int, int]:
        """(single-qubit count, two-qubit count)."""
        n1 = sum(1 for op in self._ops if len(op.location) == 1)
        return n1, len(self._ops) - n1

    def depth(self) -> int:
        frontier = [0] * self._num_qubits
        for op in self._ops:
            level = 1 + max(frontier[q] for q in op.location)
            for q in op.location:
                frontier[q] = level
        return max(frontier, default=0)

    def interaction_pairs(self) -> frozenset[frozenset[int]]:
        """The set of qubit pairs coupled by some two-qubit op."""
        return frozenset(
            frozenset(op.location) for op in self._ops if len(op.location) == 2
        )

    def unitary(self, params=None, cap: int = DEFAULT_QUBIT_CAP) -> UnitaryMatrix:
        return circuit_unitary(self, params, cap)


# ---------------------------------------------------------------------------
# Dense evaluation.


def _apply_left(
    mat: np.ndarray, gate_mat: np.ndarray, loc: tuple[int, ...], num_qubits: int
) -> np.ndarray:
    """Return Embed(gate_mat) @ mat, contracting only the located qubit axes.

    ``mat`` has shape (2**num_qubits, cols); its row index is viewed as
    num_qubits binary axes with qubit 0 first.
    """
    a = len(loc)
    t = mat.reshape((2,) * num_qubits + (mat.shape[1],))
    gt = gate_mat.reshape((2,) * (2 * a))
    out = np.tensordot(gt, t, axes=(tuple(range(a, 2 * a)), loc))
    out = np.moveaxis(out, tuple(range(a)), loc)
    return out.reshape(mat.shape)


def circuit_matrix(
    circuit: Circuit, params=None, cap: int = DEFAULT_QUBIT_CAP
) -> np.ndarray:
    """Dense ndarray of the circuit unitary; raises CapacityError over the cap."""
    q = circuit.num_qubits
    if q > cap:
        raise CapacityError(
            f"{q} qubits exceeds the materialization cap of {cap}"
        )
    if params is not None:
        circuit = circuit.with_params(params)
    mat = np.eye(2**q, dtype=np.complex128)
    for op in circuit.ops:
        mat = _apply_left(mat, op.matrix(), op.location, q)
    return mat


def circuit_unitary(
    circuit: Circuit, params=None, cap: int = DEFAULT_QUBIT_CAP
) -> UnitaryMatrix:
    """The circuit's unitary with qubit 0 as the most significant bit."""
    return UnitaryMatrix(circuit_matrix(circuit, params, cap), _checked=True)


# ---------------------------------------------------------------------------
# Interaction regions.


@dataclass(frozen=True)
class Region:
    """A maximal contiguous run of ops supported on one qubit pair.

    Runs open at a two-qubit op and absorb following ops that act entirely
    within the pair, single-qubit ops included. ``stop`` is exclusive.
    """

    start: int
    stop: int
    qubits: tuple[int, int]

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(self.start, self.stop))

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.stop)


def group_interactions(circuit: Circuit) -> list[Region]:
    """Group consecutive ops supported on the same qubit pair.

    Every two-qubit op lands in exactly one region; single-qubit ops are
    absorbed when contiguous with a region on their qubit, and left unassigned
    otherwise. Regions are disjoint, contiguous, and ordered left to right.
    """
    ops = circuit.ops
    regions: list[Region] = []
    i = 0
    n = len(ops)
    while i < n:
        op = ops[i]
        if len(op.location) != 2:
            i += 1
            continue
        pair = set(op.location)
        j = i + 1
        while j < n and set(ops[j].location) <= pair:
            j += 1
        regions.append(Region(i, j, op.location))
        i = j
    return regions
