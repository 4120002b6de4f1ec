"""Greedy left-to-right partitioning into bounded-width blocks.

One block is open at a time. Each op joins the open block when the union of
its qubits with the block's stays within the block size; otherwise the block
closes and a new one opens at the op. Concatenating the blocks in order
therefore reproduces the input op list exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, PartitionError
from .ir import Circuit, Operation


@dataclass(frozen=True)
class Block:
    """A sub-circuit over a sorted qubit subset, with its original op span."""

    location: tuple[int, ...]
    circuit: Circuit
    span: tuple[int, int]


@dataclass(frozen=True)
class Partition:
    num_qubits: int
    blocks: tuple[Block, ...]


def _close_block(qubits, ops, span) -> Block:
    location = tuple(sorted(qubits))
    local = {g: i for i, g in enumerate(location)}
    local_ops = [
        Operation(op.gate, tuple(local[q] for q in op.location), op.params)
        for op in ops
    ]
    return Block(location, Circuit(len(location), local_ops), span)


def partition(circuit: Circuit, block_size: int) -> Partition:
    """Split a circuit into blocks acting on at most ``block_size`` qubits."""
    if block_size < 2:
        raise PartitionError(f"block size must be >= 2, got {block_size}")
    blocks: list[Block] = []
    cur_qubits: set[int] = set()
    cur_ops: list[Operation] = []
    cur_start = 0
    for idx, op in enumerate(circuit.ops):
        if len(op.location) > block_size:
            raise PartitionError(
                f"op on {op.location} is wider than block size {block_size}"
            )
        union = cur_qubits | set(op.location)
        if cur_ops and len(union) <= block_size:
            cur_qubits = union
            cur_ops.append(op)
        else:
            if cur_ops:
                blocks.append(_close_block(cur_qubits, cur_ops, (cur_start, idx)))
            cur_qubits = set(op.location)
            cur_ops = [op]
            cur_start = idx
    if cur_ops:
        blocks.append(
            _close_block(cur_qubits, cur_ops, (cur_start, len(circuit.ops)))
        )
    return Partition(circuit.num_qubits, tuple(blocks))


def reassemble(part: Partition) -> Circuit:
    """Concatenate blocks back into a flat circuit on the global qubits."""
    spans = sorted(b.span for b in part.blocks)
    for (s1, e1), (s2, _) in zip(spans, spans[1:]):
        if s2 < e1:
            raise ConsistencyError(
                f"blocks claim overlapping spans ({s1}, {e1}) and ({s2}, ...)"
            )
    ops: list[Operation] = []
    for block in part.blocks:
        for op in block.circuit.ops:
            ops.append(
                Operation(
                    op.gate,
                    tuple(block.location[q] for q in op.location),
                    op.params,
                )
            )
    return Circuit(part.num_qubits, ops)
