"""OpenQASM 2.0 subset reader and writer.

Supported statements: the version header, ``include "qelib1.inc"``, qreg
and creg declarations (cregs are accepted and ignored), opaque gate
declarations, and gate applications from the table below. Parameters are
real constant expressions over ``+ - * /``, parentheses, and ``pi``.

Gate spellings on input: u3/u/u2/u1, rx, ry, rz, x, h, sx, s, sdg, t, tdg,
cx, cz, rzz, rxx, and the opaque two-qubit names xx, zz, sqisw, syc. The
u2/u1/s/sdg/t/tdg forms are stored as the equivalent u3 (entry-for-entry
equal, not merely equal up to phase). Measurement, reset, barriers, gate
definitions, classical control, and whole-register broadcasts are out of
scope and raise a typed error carrying the source position.

Output uses one flat ``q`` register, qelib1 names where they exist, opaque
declarations for the vendor two-qubit gates, and parameters printed at 12
significant digits, which round-trips every circuit built from registry
gates op-for-op.
"""

from __future__ import annotations

import math
import re

from .errors import EmitError, QasmSyntaxError, UnsupportedFeatureError
from .gates import CNOT, CZ, GATES, H, RX, RY, RZ, RXX, RZZ, SX, U3, X
from .ir import Circuit, Operation

__all__ = ["parse_qasm", "emit_qasm"]

_TOKEN_RE = re.compile(
    r"""(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<string>"[^"\n]*")
      | (?P<symbol>->|==|[{}()\[\];,+\-*/=<>!])
    """,
    re.VERBOSE,
)

_UNSUPPORTED_STATEMENTS = {
    "measure": "measurement",
    "reset": "reset",
    "barrier": "barriers",
    "if": "classical control",
    "gate": "gate definitions",
}


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            line_start = pos
            continue
        if ch in " \t\r":
            pos += 1
            continue
        if text.startswith("//", pos):
            nl = text.find("\n", pos)
            pos = n if nl < 0 else nl
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmSyntaxError(
                f"unexpected character {ch!r}",
                line=line,
                column=pos - line_start + 1,
            )
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, n - line_start + 1))
    return tokens


# name -> (gate, qasm parameter count, angle mapping)
_GATE_TABLE = {
    "u3": (U3, 3, lambda p: p),
    "u": (U3, 3, lambda p: p),
    "U": (U3, 3, lambda p: p),
    "u2": (U3, 2, lambda p: (math.pi / 2, p[0], p[1])),
    "u1": (U3, 1, lambda p: (0.0, 0.0, p[0])),
    "s": (U3, 0, lambda p: (0.0, 0.0, math.pi / 2)),
    "sdg": (U3, 0, lambda p: (0.0, 0.0, -math.pi / 2)),
    "t": (U3, 0, lambda p: (0.0, 0.0, math.pi / 4)),
    "tdg": (U3, 0, lambda p: (0.0, 0.0, -math.pi / 4)),
    "rx": (RX, 1, lambda p: p),
    "ry": (RY, 1, lambda p: p),
    "rz": (RZ, 1, lambda p: p),
    "x": (X, 0, lambda p: ()),
    "h": (H, 0, lambda p: ()),
    "sx": (SX, 0, lambda p: ()),
    "cx": (CNOT, 0, lambda p: ()),
    "CX": (CNOT, 0, lambda p: ()),
    "cz": (CZ, 0, lambda p: ()),
    "rzz": (RZZ, 1, lambda p: p),
    "rxx": (RXX, 1, lambda p: p),
    "xx": (GATES["XX"], 0, lambda p: ()),
    "zz": (GATES["ZZ"], 0, lambda p: ()),
    "sqisw": (GATES["SQISW"], 0, lambda p: ()),
    "syc": (GATES["SYC"], 0, lambda p: ()),
}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.registers: dict[str, tuple[int, int]] = {}  # name -> offset, size
        self.num_qubits = 0
        self.ops: list[Operation] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message, tok=None, cls=QasmSyntaxError):
        tok = tok or self.peek()
        raise cls(message, line=tok.line, column=tok.column)

    def expect(self, kind, text=None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            self.error(f"expected {want!r}, got {got!r}", tok)
        return tok

    def parse(self) -> Circuit:
        self.header()
        while self.peek().kind != "eof":
            self.statement()
        if self.num_qubits == 0:
            tok = self.peek()
            self.error("no qreg declared", tok)
        return Circuit(self.num_qubits, self.ops)

    def header(self):
        tok = self.expect("name", "OPENQASM")
        version = self.expect("number")
        if version.text != "2.0":
            self.error(
                f"only OPENQASM 2.0 is supported, got {version.text}",
                version,
                UnsupportedFeatureError,
            )
        self.expect("symbol", ";")
        del tok

    def statement(self):
        tok = self.peek()
        if tok.kind != "name":
            self.error(f"expected a statement, got {tok.text!r}", tok)
        if tok.text in _UNSUPPORTED_STATEMENTS:
            self.error(
                f"{_UNSUPPORTED_STATEMENTS[tok.text]} not supported",
                tok,
                UnsupportedFeatureError,
            )
        if tok.text == "include":
            self.next()
            path = self.expect("string")
            if path.text != '"qelib1.inc"':
                self.error(
                    f"only qelib1.inc may be included, got {path.text}",
                    path,
                    UnsupportedFeatureError,
                )
            self.expect("symbol", ";")
            return
        if tok.text == "qreg":
            self.next()
            name = self.expect("name")
            self.expect("symbol", "[")
            size = self.expect("number")
            self.expect("symbol", "]")
            self.expect("symbol", ";")
            if name.text in self.registers:
                self.error(f"register {name.text!r} redeclared", name)
            if not size.text.isdigit() or int(size.text) < 1:
                self.error(f"bad register size {size.text}", size)
            self.registers[name.text] = (self.num_qubits, int(size.text))
            self.num_qubits += int(size.text)
            return
        if tok.text == "creg":
            self.next()
            self.expect("name")
            self.expect("symbol", "[")
            self.expect("number")
            self.expect("symbol", "]")
            self.expect("symbol", ";")
            return
        if tok.text == "opaque":
            # Declaration only; uses are resolved through the gate table.
            self.next()
            self.expect("name")
            while self.peek().text != ";":
                if self.peek().kind == "eof":
                    self.error("unterminated opaque declaration", tok)
                self.next()
            self.expect("symbol", ";")
            return
        self.application()

    def application(self):
        name = self.expect("name")
        entry = _GATE_TABLE.get(name.text)
        if entry is None:
            self.error(
                f"gate {name.text!r} is not in the supported set",
                name,
                UnsupportedFeatureError,
            )
        gate, n_params, mapping = entry
        params: list[float] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                params.append(self.expression())
                while self.peek().text == ",":
                    self.next()
                    params.append(self.expression())
            self.expect("symbol", ")")
        if len(params) != n_params:
            self.error(
                f"{name.text} takes {n_params} parameter(s), got {len(params)}",
                name,
            )
        qubits = [self.qubit()]
        while self.peek().text == ",":
            self.next()
            qubits.append(self.qubit())
        self.expect("symbol", ";")
        if len(qubits) != gate.arity:
            self.error(
                f"{name.text} acts on {gate.arity} qubit(s), got {len(qubits)}",
                name,
            )
        if len(set(qubits)) != len(qubits):
            self.error(f"{name.text} applied to repeated qubits", name)
        self.ops.append(Operation(gate, tuple(qubits), mapping(tuple(params))))

    def qubit(self) -> int:
        name = self.expect("name")
        if name.text not in self.registers:
            self.error(f"undeclared register {name.text!r}", name)
        if self.peek().text != "[":
            self.error(
                "whole-register application not supported",
                name,
                UnsupportedFeatureError,
            )
        self.expect("symbol", "[")
        idx = self.expect("number")
        self.expect("symbol", "]")
        offset, size = self.registers[name.text]
        if not idx.text.isdigit() or int(idx.text) >= size:
            self.error(
                f"index {idx.text} out of range for {name.text}[{size}]", idx
            )
        return offset + int(idx.text)

    # Constant expressions: sum -> product -> unary -> atom.
    def expression(self) -> float:
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.factor()
            if op == "/":
                if rhs == 0.0:
                    self.error("division by zero in parameter")
                value = value / rhs
            else:
                value = value * rhs
        return value

    def factor(self) -> float:
        tok = self.peek()
        if tok.text == "-":
            self.next()
            return -self.factor()
        if tok.text == "+":
            self.next()
            return self.factor()
        if tok.text == "(":
            self.next()
            value = self.expression()
            self.expect("symbol", ")")
            return value
        if tok.kind == "number":
            self.next()
            return float(tok.text)
        if tok.kind == "name" and tok.text == "pi":
            self.next()
            return math.pi
        if tok.kind == "name":
            self.error(
                f"function or symbol {tok.text!r} not supported in parameters",
                tok,
                UnsupportedFeatureError,
            )
        self.error(f"expected a parameter value, got {tok.text!r}", tok)


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 source into a circuit.

    Multiple qregs are flattened into one qubit index space in declaration
    order. Errors carry the 1-based source line and column.
    """
    return _Parser(text).parse()


def _format_param(value: float) -> str:
    return f"{value:.12g}"


def emit_qasm(circuit: Circuit) -> str:
    """Write a circuit as OpenQASM 2.0 using a single flat register."""
    from .gates import OPAQUE_QASM_NAMES

    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    opaque_used = []
    for op in circuit.ops:
        name = op.gate.qasm_name
        if name is None or name not in _GATE_TABLE:
            raise EmitError(f"gate {op.gate.name} has no QASM spelling")
        if name in OPAQUE_QASM_NAMES and name not in opaque_used:
            opaque_used.append(name)
    for name in opaque_used:
        lines.append(f"opaque {name} a,b;")
    lines.append(f"qreg q[{circuit.num_qubits}];")
    for op in circuit.ops:
        params = ""
        if op.params:
            params = "(" + ",".join(_format_param(p) for p in op.params) + ")"
        args = ",".join(f"q[{q}]" for q in op.location)
        lines.append(f"{op.gate.qasm_name}{params} {args};")
    return "\n".join(lines) + "\n"
