import math

import numpy as np
import pytest

from qforge.errors import (
    EmitError,
    QasmError,
    QasmSyntaxError,
    UnsupportedFeatureError,
)
from qforge.gates import (
    CNOT,
    CZ,
    GATES,
    H,
    RX,
    RZ,
    RZZ,
    SQISW,
    SX,
    SYC,
    U3,
    X,
    XX,
    ZZ,
)
from qforge.generators import random_circuit
from qforge.ir import Circuit, Operation, circuit_matrix
from qforge.numerics import unitary_distance_stable
from qforge.qasm import emit_qasm, parse_qasm

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def op(gate, *loc, params=()):
    return Operation(gate, tuple(loc), tuple(params))


def parse_ops(body, qubits=3):
    return parse_qasm(f"{HEADER}qreg q[{qubits}];\n{body}\n").ops


# --- emission and round trips ---------------------------------------------

def test_empty_circuit_round_trip():
    c = Circuit(2)
    out = parse_qasm(emit_qasm(c))
    assert out.num_qubits == 2
    assert len(out) == 0


def test_registry_gates_round_trip():
    ops = []
    q = 0
    for gate in GATES.values():
        loc = (0, 1) if gate.arity == 2 else (q % 3,)
        params = tuple(0.1 * (i + 1) for i in range(gate.num_params))
        ops.append(Operation(gate, loc, params))
        q += 1
    c = Circuit(3, ops)
    back = parse_qasm(emit_qasm(c))
    assert [o.gate.name for o in back.ops] == [o.gate.name for o in c.ops]
    assert [o.location for o in back.ops] == [o.location for o in c.ops]
    d = unitary_distance_stable(circuit_matrix(back), circuit_matrix(c))
    assert d < 1e-24


def test_emit_is_idempotent():
    c = random_circuit(4, 30, seed=55)
    text = emit_qasm(c)
    assert emit_qasm(parse_qasm(text)) == text


def test_random_circuits_round_trip():
    for seed in (0, 1, 2):
        c = random_circuit(4, 100, seed=seed)
        back = parse_qasm(emit_qasm(c))
        assert len(back) == len(c)
        assert unitary_distance_stable(
            circuit_matrix(back), circuit_matrix(c)) < 1e-20


def test_params_emitted_with_twelve_significant_digits():
    c = Circuit(1, [op(RZ, 0, params=(math.pi,))])
    assert "rz(3.14159265359)" in emit_qasm(c)


def test_opaque_gates_declared_before_use():
    c = Circuit(2, [op(SQISW, 0, 1), op(SYC, 0, 1), op(XX, 0, 1),
                    op(ZZ, 0, 1)])
    text = emit_qasm(c)
    for name in ("sqisw", "syc", "xx", "zz"):
        decl = text.index(f"opaque {name}")
        use = text.index(f"{name} q[")
        assert decl < use
    back = parse_qasm(text)
    assert [o.gate.name for o in back.ops] == ["SQISW", "SYC", "XX", "ZZ"]


def test_emit_rejects_unnamed_gate():
    from qforge.gates import Gate
    anon = Gate(name="ANON", arity=1, num_params=0,
                _matrix=lambda p: np.eye(2), _partials=lambda p: [],
                qasm_name=None)
    with pytest.raises(EmitError):
        emit_qasm(Circuit(1, [Operation(anon, (0,))]))


# --- parsing basics -------------------------------------------------------

def test_parse_simple_program():
    ops = parse_ops("h q[0];\ncx q[0],q[1];\nrz(0.5) q[2];")
    assert [(o.gate.name, o.location) for o in ops] == [
        ("H", (0,)), ("CNOT", (0, 1)), ("RZ", (2,))]
    assert ops[2].params == (0.5,)


def test_parse_uppercase_builtins():
    ops = parse_ops("U(0.1,0.2,0.3) q[0];\nCX q[0],q[1];")
    assert [o.gate.name for o in ops] == ["U3", "CNOT"]


def test_parse_comments_and_whitespace():
    src = (HEADER
           + "// leading comment\n"
           + "qreg q[1];  // trailing comment\n\n"
           + "   x   q[0] ;\n")
    assert [o.gate.name for o in parse_qasm(src).ops] == ["X"]


def test_parse_multiple_qregs_flattened():
    src = HEADER + "qreg a[2];\nqreg b[2];\nx a[1];\ncx a[0],b[1];\n"
    c = parse_qasm(src)
    assert c.num_qubits == 4
    assert [o.location for o in c.ops] == [(1,), (0, 3)]


def test_parse_creg_is_ignored():
    src = HEADER + "qreg q[2];\ncreg c[2];\nx q[0];\n"
    assert len(parse_qasm(src)) == 1


def test_parse_opaque_declaration_is_skipped():
    src = HEADER + "opaque sqisw a,b;\nqreg q[2];\nsqisw q[0],q[1];\n"
    assert [o.gate.name for o in parse_qasm(src).ops] == ["SQISW"]


# --- alias lowering, checked against exact matrices -----------------------

@pytest.mark.parametrize("stmt,reference", [
    ("s q[0];", np.diag([1, 1j])),
    ("sdg q[0];", np.diag([1, -1j])),
    ("t q[0];", np.diag([1, np.exp(0.25j * math.pi)])),
    ("tdg q[0];", np.diag([1, np.exp(-0.25j * math.pi)])),
    ("u1(0.7) q[0];", np.diag([1, np.exp(0.7j)])),
])
def test_phase_gate_aliases_are_phase_exact(stmt, reference):
    (parsed,) = parse_ops(stmt, qubits=1)
    assert parsed.gate is U3
    got = np.asarray(parsed.matrix())
    assert np.allclose(got, reference, atol=1e-15)


def test_u2_alias():
    (parsed,) = parse_ops("u2(0.3,0.9) q[0];", qubits=1)
    assert parsed.gate is U3
    assert parsed.params == pytest.approx((math.pi / 2, 0.3, 0.9))


def test_u_aliases_map_to_u3():
    for stmt in ("u(0.1,0.2,0.3) q[0];", "u3(0.1,0.2,0.3) q[0];"):
        (parsed,) = parse_ops(stmt, qubits=1)
        assert parsed.gate is U3
        assert parsed.params == (0.1, 0.2, 0.3)


def test_native_gates_pass_through():
    ops = parse_ops("rx(1.0) q[0];\nry(2.0) q[0];\nsx q[0];\n"
                    "cz q[0],q[1];\nrzz(0.4) q[0],q[1];\nrxx(0.5) q[1],q[2];",
                    qubits=3)
    assert [o.gate.name for o in ops] == ["RX", "RY", "SX", "CZ", "RZZ", "RXX"]


# --- parameter expressions ------------------------------------------------

@pytest.mark.parametrize("expr,value", [
    ("pi", math.pi),
    ("-pi/2", -math.pi / 2),
    ("pi/4", math.pi / 4),
    ("2*pi", 2 * math.pi),
    ("1+2", 3.0),
    ("3-5", -2.0),
    ("(1+2)*0.5", 1.5),
    ("-(0.25)", -0.25),
    ("+0.5", 0.5),
    ("1e-3", 1e-3),
    ("pi*pi/4-1", math.pi**2 / 4 - 1),
])
def test_parameter_expressions(expr, value):
    (parsed,) = parse_ops(f"rz({expr}) q[0];", qubits=1)
    assert parsed.params[0] == pytest.approx(value, rel=1e-15)


def test_division_by_zero_rejected():
    with pytest.raises(QasmError) as exc:
        parse_ops("rz(1/0) q[0];", qubits=1)
    assert exc.value.line is not None


# --- error reporting ------------------------------------------------------

def expect_error(src, kind, fragment):
    with pytest.raises(kind) as exc:
        parse_qasm(src)
    err = exc.value
    assert err.line is not None and err.column is not None
    assert fragment in str(err)
    return err


def test_measure_unsupported():
    err = expect_error(HEADER + "qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];",
                       UnsupportedFeatureError, "measure")
    assert err.line == 5


def test_reset_unsupported():
    expect_error(HEADER + "qreg q[1];\nreset q[0];",
                 UnsupportedFeatureError, "reset")


def test_barrier_unsupported():
    expect_error(HEADER + "qreg q[2];\nbarrier q;",
                 UnsupportedFeatureError, "barrier")


def test_conditional_unsupported():
    expect_error(HEADER + "qreg q[1];\ncreg c[1];\nif(c==1) x q[0];",
                 UnsupportedFeatureError, "classical control")


def test_gate_definition_unsupported():
    expect_error(HEADER + "gate foo a { U(0,0,0) a; }\nqreg q[1];",
                 UnsupportedFeatureError, "gate")


def test_broadcast_unsupported():
    expect_error(HEADER + "qreg q[2];\nx q;",
                 UnsupportedFeatureError, "register")


def test_non_qelib_include_unsupported():
    expect_error('OPENQASM 2.0;\ninclude "other.inc";\nqreg q[1];\n',
                 UnsupportedFeatureError, "other.inc")


def test_wrong_version_unsupported():
    err = expect_error("OPENQASM 3.0;\nqreg q[1];\n",
                       UnsupportedFeatureError, "2.0")
    assert err.line == 1


def test_unknown_gate_rejected():
    expect_error(HEADER + "qreg q[1];\nfrobnicate q[0];",
                 QasmError, "frobnicate")


def test_undeclared_register_rejected():
    expect_error(HEADER + "qreg q[1];\nx r[0];", QasmError, "r")


def test_index_out_of_range_rejected():
    expect_error(HEADER + "qreg q[2];\nx q[5];", QasmError, "out of range")


def test_missing_qreg_rejected():
    expect_error(HEADER + "x q[0];", QasmError, "register")


def test_wrong_param_count_rejected():
    expect_error(HEADER + "qreg q[1];\nrz q[0];", QasmError, "rz")
    expect_error(HEADER + "qreg q[1];\nrz(0.1,0.2) q[0];", QasmError, "rz")


def test_repeated_qubit_rejected():
    expect_error(HEADER + "qreg q[2];\ncx q[1],q[1];", QasmError, "repeated")


def test_syntax_error_has_position():
    with pytest.raises(QasmSyntaxError) as exc:
        parse_qasm(HEADER + "qreg q[1];\nx q[0]")  # missing semicolon
    assert exc.value.line is not None


def test_bad_character_rejected():
    with pytest.raises(QasmSyntaxError):
        parse_qasm(HEADER + "qreg q[1];\nx q[0]; $weird\n")


def test_redeclared_register_rejected():
    expect_error(HEADER + "qreg q[1];\nqreg q[2];", QasmError, "q")


def test_error_column_points_into_line():
    src = HEADER + "qreg q[2];\ncx q[0],q[0];"
    with pytest.raises(QasmError) as exc:
        parse_qasm(src)
    line = src.splitlines()[exc.value.line - 1]
    assert 1 <= exc.value.column <= len(line) + 1
