"""Exact and upper-bound verification of compiled circuits.

Exact mode materializes both circuits and measures their distance directly.
Upper-bound mode never builds the whole unitary: it sums per-section
distances between original and compiled sub-circuits recorded by the
partitioned passes. Summing section errors bounds the whole-circuit error
when at most one section changed (then it is exact) and remains an accurate
estimate otherwise; cross terms between sections are second order in the
individual distances. Growing the section size merges neighboring sections
and tightens the estimate toward the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PairingError
from .ir import Circuit, Operation, circuit_matrix
from .numerics import unitary_distance_stable
from .passes import SectionRecord

DEFAULT_SECTION_SIZE = 8

__all__ = [
    "DEFAULT_SECTION_SIZE",
    "VerificationReport",
    "resection",
    "verify_exact",
    "verify_upper_bound",
]


@dataclass(frozen=True)
class VerificationReport:
    mode: str
    total_distance: float
    section_distances: tuple[tuple[int, float], ...]
    section_size: int

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "total_distance": self.total_distance,
            "section_size": self.section_size,
            "sections": [
                {"id": i, "distance": d} for i, d in self.section_distances
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"mode: {self.mode}",
            f"section size: {self.section_size}",
            f"sections: {len(self.section_distances)}",
        ]
        for i, d in self.section_distances:
            lines.append(f"  section {i:>4}  distance {d:.6e}")
        lines.append(f"total distance: {self.total_distance:.6e}")
        return "\n".join(lines)


def verify_exact(original: Circuit, compiled: Circuit) -> VerificationReport:
    """Distance between the two circuits' full unitaries.

    Both circuits must stay under the materialization cap; wider circuits go
    through ``verify_upper_bound`` with recorded sections instead.
    """
    if original.num_qubits != compiled.num_qubits:
        raise PairingError(
            f"qubit counts differ: original {original.num_qubits}, "
            f"compiled {compiled.num_qubits}"
        )
    d = unitary_distance_stable(
        circuit_matrix(compiled), circuit_matrix(original)
    )
    return VerificationReport(
        "exact", d, ((0, d),), original.num_qubits
    )


def _as_section(item, index: int) -> SectionRecord:
    if isinstance(item, SectionRecord):
        orig, comp = item.original, item.compiled
        if orig.num_qubits != len(item.location) or comp.num_qubits != len(
            item.location
        ):
            raise PairingError(
                f"section {index}: sub-circuits do not match location "
                f"{item.location}"
            )
        return item
    orig, comp = item
    if orig.num_qubits != comp.num_qubits:
        raise PairingError(
            f"section {index}: qubit counts differ "
            f"({orig.num_qubits} vs {comp.num_qubits})"
        )
    loc = tuple(range(orig.num_qubits))
    return SectionRecord(loc, (index, index + 1), orig, comp, 0.0)


def _merge(a: SectionRecord, b: SectionRecord) -> SectionRecord:
    location = tuple(sorted(set(a.location) | set(b.location)))
    index = {q: i for i, q in enumerate(location)}

    def remap(section: SectionRecord, circuit: Circuit) -> list[Operation]:
        return [
            Operation(
                op.gate,
                tuple(index[section.location[q]] for q in op.location),
                op.params,
            )
            for op in circuit.ops
        ]

    original = Circuit(
        len(location), remap(a, a.original) + remap(b, b.original)
    )
    compiled = Circuit(
        len(location), remap(a, a.compiled) + remap(b, b.compiled)
    )
    return SectionRecord(
        location,
        (a.span[0], b.span[1]),
        original,
        compiled,
        a.distance + b.distance,
    )


def resection(sections, section_size: int) -> tuple[SectionRecord, ...]:
    """Greedily merge consecutive sections while the qubit union fits.

    Mirrors the partitioner's scan: a running group absorbs the next section
    whenever the combined qubit support stays within ``section_size``.
    """
    if section_size < 2:
        raise ValueError(f"section size must be >= 2, got {section_size}")
    merged: list[SectionRecord] = []
    for section in sections:
        if (
            merged
            and len(set(merged[-1].location) | set(section.location))
            <= section_size
        ):
            merged[-1] = _merge(merged[-1], section)
        else:
            merged.append(section)
    return tuple(merged)


def verify_upper_bound(
    section_pairs, section_size: int | None = None
) -> VerificationReport:
    """Sum exact per-section distances between original and compiled parts.

    ``section_pairs`` holds SectionRecords from a partitioned pass, or bare
    (original, compiled) circuit pairs. Distances are always recomputed from
    the circuits, never read from the records. With ``section_size`` set,
    consecutive sections are first merged up to that many qubits.
    """
    sections = [
        _as_section(item, i) for i, item in enumerate(section_pairs)
    ]
    size = section_size
    if size is not None:
        sections = list(resection(sections, size))
    else:
        size = max((len(s.location) for s in sections), default=0)
    distances = tuple(
        (
            i,
            unitary_distance_stable(
                circuit_matrix(s.compiled), circuit_matrix(s.original)
            ),
        )
        for i, s in enumerate(sections)
    )
    total = math.fsum(d for _, d in distances)
    return VerificationReport("upper_bound", total, distances, size)
