"""Numerical quantum-circuit optimization.

Rewrites circuits by re-solving gate parameters against a target unitary:
deleting gates whose effect the rest of the circuit absorbs, and
retargeting circuits onto restricted two-qubit gate sets. Wide circuits are
partitioned into few-qubit blocks, optimized blockwise, and reassembled,
with per-block residuals summed into a whole-circuit error bound.
"""

from .errors import (
    ArityError,
    BoundsError,
    CapacityError,
    ConsistencyError,
    EmitError,
    NonUnitaryError,
    PairingError,
    PartitionError,
    PipelineError,
    QasmError,
    QasmSyntaxError,
    QForgeError,
    RetargetError,
    ShapeError,
    UnsupportedFeatureError,
)
from .gates import GATES, Gate, get_gate, u3_angles
from .gatesets import (
    GateSet,
    known_set_names,
    load_gate_set,
    named_gate_set,
    resolve_gate_set,
)
from .generators import (
    cnot_ladder,
    generic_two_qubit_circuit,
    insert_inverse_pairs,
    inverse_operation,
    random_circuit,
    tfim_trotter,
)
from .ir import (
    Circuit,
    Operation,
    Region,
    circuit_matrix,
    circuit_unitary,
    group_interactions,
)
from .numerics import (
    Evaluator,
    InstantiationConfig,
    InstantiationResult,
    cost_and_gradient,
    derive_seed,
    hs_distance,
    hs_distance_f,
    hs_distance_p,
    instantiate,
    unitary_distance,
    unitary_distance_stable,
)
from .partition import Block, Partition, partition, reassemble
from .passes import (
    DeleteConfig,
    DeleteOutcome,
    DeletePass,
    PassReport,
    RetargetConfig,
    RetargetOutcome,
    RetargetPass,
    SectionRecord,
    StageReport,
    build_templates,
    delete_gates,
    delete_gates_partitioned,
    retarget,
    retarget_partitioned,
    run_pipeline,
)
from .qasm import emit_qasm, parse_qasm
from .unitary import UnitaryMatrix
from .verify import (
    DEFAULT_SECTION_SIZE,
    VerificationReport,
    resection,
    verify_exact,
    verify_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Block",
    "BoundsError",
    "CapacityError",
    "Circuit",
    "ConsistencyError",
    "DEFAULT_SECTION_SIZE",
    "DeleteConfig",
    "DeleteOutcome",
    "DeletePass",
    "EmitError",
    "Evaluator",
    "GATES",
    "Gate",
    "GateSet",
    "InstantiationConfig",
    "InstantiationResult",
    "NonUnitaryError",
    "Operation",
    "PairingError",
    "Partition",
    "PartitionError",
    "PassReport",
    "PipelineError",
    "QForgeError",
    "QasmError",
    "QasmSyntaxError",
    "Region",
    "RetargetConfig",
    "RetargetError",
    "RetargetOutcome",
    "RetargetPass",
    "SectionRecord",
    "ShapeError",
    "StageReport",
    "UnitaryMatrix",
    "UnsupportedFeatureError",
    "VerificationReport",
    "build_templates",
    "circuit_matrix",
    "circuit_unitary",
    "cnot_ladder",
    "cost_and_gradient",
    "delete_gates",
    "delete_gates_partitioned",
    "derive_seed",
    "emit_qasm",
    "generic_two_qubit_circuit",
    "get_gate",
    "group_interactions",
    "hs_distance",
    "hs_distance_f",
    "hs_distance_p",
    "insert_inverse_pairs",
    "instantiate",
    "inverse_operation",
    "known_set_names",
    "load_gate_set",
    "named_gate_set",
    "parse_qasm",
    "partition",
    "random_circuit",
    "reassemble",
    "resection",
    "resolve_gate_set",
    "retarget",
    "retarget_partitioned",
    "run_pipeline",
    "tfim_trotter",
    "u3_angles",
    "unitary_distance",
    "unitary_distance_stable",
    "verify_exact",
    "verify_upper_bound",
]
