import math

import numpy as np
import pytest

from qforge.errors import PairingError
from qforge.gates import CNOT, CZ, H, RX, RZ, RZZ, U3, X
from qforge.generators import random_circuit
from qforge.ir import Circuit, Operation, circuit_matrix
from qforge.numerics import unitary_distance_stable
from qforge.passes import DeleteConfig, SectionRecord, delete_gates_partitioned
from qforge.verify import (
    DEFAULT_SECTION_SIZE,
    VerificationReport,
    resection,
    verify_exact,
    verify_upper_bound,
)


def op(gate, *loc, params=()):
    return Operation(gate, tuple(loc), tuple(params))


def record(location, original, compiled, span=(0, 0), distance=0.0):
    return SectionRecord(tuple(location), span, original, compiled, distance)


# --- exact verification ---------------------------------------------------

def test_exact_identical_circuits_give_zero():
    c = random_circuit(3, 12, seed=4)
    report = verify_exact(c, c)
    assert report.mode == "exact"
    assert report.total_distance == 0.0


def test_exact_appended_rotation_closed_form():
    # appending RZ(eps) multiplies the unitary by an embedded phase pair, so
    # the distance is exactly 1 - cos(eps/2)
    eps = 1e-3
    c = random_circuit(3, 10, seed=6)
    drifted = c.append(op(RZ, 1, params=(eps,)))
    report = verify_exact(c, drifted)
    want = 1.0 - math.cos(eps / 2)
    assert report.total_distance == pytest.approx(want, rel=1e-6)


def test_exact_cancelling_pair_is_zero():
    original = Circuit(2, [op(CNOT, 0, 1), op(CNOT, 0, 1)])
    report = verify_exact(original, Circuit(2))
    assert report.total_distance < 1e-30


def test_exact_rejects_width_mismatch():
    with pytest.raises(PairingError):
        verify_exact(Circuit(2), Circuit(3))


def test_exact_orthogonal_circuits():
    # X on one qubit has zero trace overlap with the identity
    report = verify_exact(Circuit(1, [op(X, 0)]), Circuit(1))
    assert report.total_distance == pytest.approx(1.0, abs=1e-12)


# --- summed upper bound ---------------------------------------------------

def test_upper_bound_unchanged_sections_are_zero():
    a = random_circuit(2, 6, seed=1)
    b = random_circuit(3, 8, seed=2)
    report = verify_upper_bound([(a, a), (b, b)])
    assert report.mode == "upper_bound"
    assert report.total_distance == 0.0
    assert [d for _, d in report.section_distances] == [0.0, 0.0]


def test_upper_bound_recomputes_stably_ignoring_recorded_distance():
    c = random_circuit(2, 6, seed=3)
    # a stale recorded distance must not leak into the report
    rec = record((0, 1), c, c, distance=0.5)
    report = verify_upper_bound([rec])
    assert report.total_distance == 0.0


def test_upper_bound_sums_known_sections():
    eps1, eps2 = 2e-3, 3e-3
    a = Circuit(1, [op(RZ, 0, params=(0.4,))])
    a2 = Circuit(1, [op(RZ, 0, params=(0.4 + eps1,))])
    b = Circuit(1, [op(RZ, 0, params=(-0.9,))])
    b2 = Circuit(1, [op(RZ, 0, params=(-0.9 + eps2,))])
    report = verify_upper_bound([(a, a2), (b, b2)])
    want = (1 - math.cos(eps1 / 2)) + (1 - math.cos(eps2 / 2))
    assert report.total_distance == pytest.approx(want, rel=1e-9)
    assert len(report.section_distances) == 2


def test_upper_bound_rejects_width_mismatch():
    with pytest.raises(PairingError):
        verify_upper_bound([(Circuit(2), Circuit(3))])


def test_upper_bound_rejects_record_location_mismatch():
    c = random_circuit(2, 4, seed=8)
    bad = record((0, 1, 2), c, c)
    with pytest.raises(PairingError):
        verify_upper_bound([bad])


def test_upper_bound_empty_section_list():
    report = verify_upper_bound([])
    assert report.total_distance == 0.0
    assert report.section_distances == ()


# --- soundness against the exact distance ---------------------------------

def disjoint_perturbed_instance(seed):
    """Five-qubit circuit with activity on {0,1,2} and {3,4} only, plus a
    compiled version whose parameters are nudged on both parts."""
    rng = np.random.default_rng(seed)
    ops = []
    for _ in range(4):
        q = int(rng.integers(0, 3))
        ops.append(op(RX, q, params=(float(rng.uniform(-2, 2)),)))
        ops.append(op(RZZ, *sorted(rng.choice(3, size=2, replace=False)),
                      params=(float(rng.uniform(-2, 2)),)))
        ops.append(op(RZ, 3 + int(rng.integers(0, 2)),
                      params=(float(rng.uniform(-2, 2)),)))
        ops.append(op(RZZ, 3, 4, params=(float(rng.uniform(-2, 2)),)))
    original = Circuit(5, ops)
    nudged = original.with_params(
        np.asarray(original.params()) + rng.uniform(-1e-3, 1e-3,
                                                    size=len(original.params())))
    return original, nudged


def split_by_support(original, nudged):
    def restrict(circ, qubits):
        remap = {q: i for i, q in enumerate(qubits)}
        kept = [Operation(o.gate, tuple(remap[q] for q in o.location), o.params)
                for o in circ.ops if set(o.location) <= set(qubits)]
        return Circuit(len(qubits), kept)

    return [
        record((0, 1, 2), restrict(original, (0, 1, 2)),
               restrict(nudged, (0, 1, 2)), span=(0, len(original))),
        record((3, 4), restrict(original, (3, 4)),
               restrict(nudged, (3, 4)), span=(0, len(original))),
    ]


def test_bound_dominates_exact_for_disjoint_sections():
    for seed in range(10):
        original, nudged = disjoint_perturbed_instance(seed)
        sections = split_by_support(original, nudged)
        bound = verify_upper_bound(sections).total_distance
        exact = unitary_distance_stable(circuit_matrix(nudged),
                                        circuit_matrix(original))
        assert bound >= exact > 0.0


def test_resection_merges_and_tightens():
    original, nudged = disjoint_perturbed_instance(99)
    sections = split_by_support(original, nudged)
    merged = resection(sections, 5)
    assert len(merged) == 1
    assert set(merged[0].location) == {0, 1, 2, 3, 4}
    fine = verify_upper_bound(sections).total_distance
    coarse = verify_upper_bound(merged).total_distance
    exact = unitary_distance_stable(circuit_matrix(nudged),
                                    circuit_matrix(original))
    # merging independent sections recovers the exact distance, which the
    # summed bound can only overstate
    assert coarse == pytest.approx(exact, rel=1e-6)
    assert fine >= coarse


def test_resection_respects_size_cap():
    original, nudged = disjoint_perturbed_instance(5)
    sections = split_by_support(original, nudged)
    kept = resection(sections, 3)
    assert len(kept) == 2
    with pytest.raises(ValueError):
        resection(sections, 1)


def test_pass_output_bound_consistent_with_exact():
    c = random_circuit(4, 16, seed=77)
    out = delete_gates_partitioned(c, 3, DeleteConfig(threshold=1e-10))
    report = verify_upper_bound(out.sections)
    exact = unitary_distance_stable(circuit_matrix(out.circuit),
                                    circuit_matrix(c))
    # recomputed stable section distances dominate the exact drift up to
    # float noise on independently rounded sections
    assert exact <= 2 * report.total_distance + 1e-12


# --- report formatting ----------------------------------------------------

def test_default_section_size_constant():
    assert DEFAULT_SECTION_SIZE == 8


def test_unset_section_size_reports_observed_width():
    c = random_circuit(2, 4, seed=2)
    report = verify_upper_bound([(c, c)])
    assert report.section_size == 2


def test_report_serialization():
    c = random_circuit(2, 5, seed=10)
    report = verify_upper_bound([(c, c)], section_size=4)
    d = report.to_dict()
    assert d["mode"] == "upper_bound"
    assert d["section_size"] == 4
    assert d["sections"] == [{"id": 0, "distance": 0.0}]
    text = report.to_text()
    assert "upper_bound" in text
    assert "total distance" in text
