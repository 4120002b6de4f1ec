"""Gate library: fixed and parameterized unitary generators with analytic partials.

Conventions. All two-qubit matrices index the first location qubit as the most
significant bit of the 4-dimensional basis index.

    U3(t, p, l) = [[cos(t/2),            -e^{il} sin(t/2)],
                   [e^{ip} sin(t/2),  e^{i(p+l)} cos(t/2)]]
    RX(t) = exp(-i t X / 2)     RZZ(t) = exp(-i t Z@Z / 2)
    RY(t) = exp(-i t Y / 2)     RXX(t) = exp(-i t X@X / 2)
    RZ(t) = exp(-i t Z / 2)

    XX    = exp(-i pi/4 X@X)    (fixed Moelmer-Sorensen gate)
    ZZ    = exp(-i pi/4 Z@Z)
    SQISW = sqrt(iSWAP), central block [[1, i], [i, 1]] / sqrt(2)
    SYC   = fSim(pi/2, pi/6)

where @ denotes the tensor product. Parameterized gates also expose analytic
partial derivatives, used by the instantiation engine's gradient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .errors import ArityError
from .unitary import UnitaryMatrix

Matrix = np.ndarray


@dataclass(frozen=True)
class Gate:
    """A named unitary generator with a fixed qubit arity.

    ``num_params`` is zero for fixed gates. ``qasm_name`` is the lowercase
    OpenQASM spelling, or None for gates with no textual form.
    """

    name: str
    arity: int
    num_params: int
    _matrix: Callable[..., Matrix] = field(repr=False, compare=False)
    _partials: Callable[..., Matrix] | None = field(
        default=None, repr=False, compare=False
    )
    qasm_name: str | None = None

    @property
    def dim(self) -> int:
        return 2**self.arity

    def matrix(self, params: Sequence[float] = ()) -> Matrix:
        """Raw ndarray of the gate unitary at the given parameter values."""
        if len(params) != self.num_params:
            raise ArityError(
                f"{self.name} takes {self.num_params} parameters, got {len(params)}"
            )
        return self._matrix(*params)

    def unitary(self, params: Sequence[float] = ()) -> UnitaryMatrix:
        return UnitaryMatrix(self.matrix(params), _checked=True)

    def partials(self, params: Sequence[float]) -> Matrix:
        """Array of shape (num_params, dim, dim) holding dU/dtheta_i."""
        if self.num_params == 0:
            return np.zeros((0, self.dim, self.dim), dtype=np.complex128)
        if len(params) != self.num_params:
            raise ArityError(
                f"{self.name} takes {self.num_params} parameters, got {len(params)}"
            )
        return self._partials(*params)

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# Parameterized matrix builders. Scalar math goes through cmath; matrices are
# assembled into preshaped buffers to keep the optimizer's hot path cheap.


def _u3_matrix(t: float, p: float, l: float) -> Matrix:
    ct = math.cos(0.5 * t)
    st = math.sin(0.5 * t)
    el = cmath.exp(1j * l)
    ep = cmath.exp(1j * p)
    m = np.empty((2, 2), dtype=np.complex128)
    m[0, 0] = ct
    m[0, 1] = -el * st
    m[1, 0] = ep * st
    m[1, 1] = ep * el * ct
    return m


def _u3_partials(t: float, p: float, l: float) -> Matrix:
    ct = 0.5 * math.cos(0.5 * t)
    st = 0.5 * math.sin(0.5 * t)
    el = cmath.exp(1j * l)
    ep = cmath.exp(1j * p)
    d = np.zeros((3, 2, 2), dtype=np.complex128)
    # d/dt
    d[0, 0, 0] = -st
    d[0, 0, 1] = -el * ct
    d[0, 1, 0] = ep * ct
    d[0, 1, 1] = -ep * el * st
    # d/dp
    d[1, 1, 0] = 2j * ep * st
    d[1, 1, 1] = 2j * ep * el * ct
    # d/dl
    d[2, 0, 1] = -2j * el * st
    d[2, 1, 1] = 2j * ep * el * ct
    return d


def _rx_matrix(t: float) -> Matrix:
    c = math.cos(0.5 * t)
    s = math.sin(0.5 * t)
    m = np.empty((2, 2), dtype=np.complex128)
    m[0, 0] = c
    m[0, 1] = -1j * s
    m[1, 0] = -1j * s
    m[1, 1] = c
    return m


def _rx_partials(t: float) -> Matrix:
    c = 0.5 * math.cos(0.5 * t)
    s = 0.5 * math.sin(0.5 * t)
    d = np.empty((1, 2, 2), dtype=np.complex128)
    d[0, 0, 0] = -s
    d[0, 0, 1] = -1j * c
    d[0, 1, 0] = -1j * c
    d[0, 1, 1] = -s
    return d


def _ry_matrix(t: float) -> Matrix:
    c = math.cos(0.5 * t)
    s = math.sin(0.5 * t)
    m = np.empty((2, 2), dtype=np.complex128)
    m[0, 0] = c
    m[0, 1] = -s
    m[1, 0] = s
    m[1, 1] = c
    return m


def _ry_partials(t: float) -> Matrix:
    c = 0.5 * math.cos(0.5 * t)
    s = 0.5 * math.sin(0.5 * t)
    d = np.empty((1, 2, 2), dtype=np.complex128)
    d[0, 0, 0] = -s
    d[0, 0, 1] = -c
    d[0, 1, 0] = c
    d[0, 1, 1] = -s
    return d


def _rz_matrix(t: float) -> Matrix:
    e = cmath.exp(-0.5j * t)
    m = np.zeros((2, 2), dtype=np.complex128)
    m[0, 0] = e
    m[1, 1] = e.conjugate()
    return m


def _rz_partials(t: float) -> Matrix:
    e = cmath.exp(-0.5j * t)
    d = np.zeros((1, 2, 2), dtype=np.complex128)
    d[0, 0, 0] = -0.5j * e
    d[0, 1, 1] = 0.5j * e.conjugate()
    return d


def _rzz_matrix(t: float) -> Matrix:
    e = cmath.exp(-0.5j * t)
    ec = e.conjugate()
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = e
    m[1, 1] = ec
    m[2, 2] = ec
    m[3, 3] = e
    return m


def _rzz_partials(t: float) -> Matrix:
    e = cmath.exp(-0.5j * t)
    de = -0.5j * e
    dec = 0.5j * e.conjugate()
    d = np.zeros((1, 4, 4), dtype=np.complex128)
    d[0, 0, 0] = de
    d[0, 1, 1] = dec
    d[0, 2, 2] = dec
    d[0, 3, 3] = de
    return d


def _rxx_matrix(t: float) -> Matrix:
    c = math.cos(0.5 * t)
    s = -1j * math.sin(0.5 * t)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = c
    m[1, 1] = c
    m[2, 2] = c
    m[3, 3] = c
    m[0, 3] = s
    m[1, 2] = s
    m[2, 1] = s
    m[3, 0] = s
    return m


def _rxx_partials(t: float) -> Matrix:
    c = -0.5j * math.cos(0.5 * t)
    s = -0.5 * math.sin(0.5 * t)
    d = np.zeros((1, 4, 4), dtype=np.complex128)
    d[0, 0, 0] = s
    d[0, 1, 1] = s
    d[0, 2, 2] = s
    d[0, 3, 3] = s
    d[0, 0, 3] = c
    d[0, 1, 2] = c
    d[0, 2, 1] = c
    d[0, 3, 0] = c
    return d


def _const(mat: Matrix) -> Matrix:
    return mat


def _fixed(name: str, rows, qasm_name: str | None) -> Gate:
    arr = np.array(rows, dtype=np.complex128)
    arr.setflags(write=False)
    arity = arr.shape[0].bit_length() - 1
    return Gate(name, arity, 0, partial(_const, arr), None, qasm_name)


_SQ2 = 1.0 / math.sqrt(2.0)

U3 = Gate("U3", 1, 3, _u3_matrix, _u3_partials, "u3")
RX = Gate("RX", 1, 1, _rx_matrix, _rx_partials, "rx")
RY = Gate("RY", 1, 1, _ry_matrix, _ry_partials, "ry")
RZ = Gate("RZ", 1, 1, _rz_matrix, _rz_partials, "rz")
RZZ = Gate("RZZ", 2, 1, _rzz_matrix, _rzz_partials, "rzz")
RXX = Gate("RXX", 2, 1, _rxx_matrix, _rxx_partials, "rxx")

X = _fixed("X", [[0, 1], [1, 0]], "x")
H = _fixed("H", [[_SQ2, _SQ2], [_SQ2, -_SQ2]], "h")
SX = _fixed(
    "SX",
    [[0.5 + 0.5j, 0.5 - 0.5j], [0.5 - 0.5j, 0.5 + 0.5j]],
    "sx",
)
CNOT = _fixed(
    "CNOT",
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    "cx",
)
CZ = _fixed(
    "CZ",
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
    "cz",
)
XX = _fixed(
    "XX",
    [
        [_SQ2, 0, 0, -1j * _SQ2],
        [0, _SQ2, -1j * _SQ2, 0],
        [0, -1j * _SQ2, _SQ2, 0],
        [-1j * _SQ2, 0, 0, _SQ2],
    ],
    "xx",
)
ZZ = _fixed(
    "ZZ",
    [
        [cmath.exp(-0.25j * math.pi), 0, 0, 0],
        [0, cmath.exp(0.25j * math.pi), 0, 0],
        [0, 0, cmath.exp(0.25j * math.pi), 0],
        [0, 0, 0, cmath.exp(-0.25j * math.pi)],
    ],
    "zz",
)
SQISW = _fixed(
    "SQISW",
    [
        [1, 0, 0, 0],
        [0, _SQ2, 1j * _SQ2, 0],
        [0, 1j * _SQ2, _SQ2, 0],
        [0, 0, 0, 1],
    ],
    "sqisw",
)
SYC = _fixed(
    "SYC",
    [
        [1, 0, 0, 0],
        [0, 0, -1j, 0],
        [0, -1j, 0, 0],
        [0, 0, 0, cmath.exp(-1j * math.pi / 6)],
    ],
    "syc",
)

GATES: dict[str, Gate] = {
    g.name: g
    for g in (U3, RX, RY, RZ, RZZ, RXX, X, H, SX, CNOT, CZ, XX, ZZ, SQISW, SYC)
}

# Two-qubit gates emitted as opaque declarations rather than qelib1 names.
OPAQUE_QASM_NAMES = ("xx", "zz", "sqisw", "syc")


def get_gate(name: str) -> Gate:
    """Look up a registry gate by name, case-insensitively."""
    key = name.upper()
    if key not in GATES:
        known = ", ".join(sorted(GATES))
        raise ValueError(f"unknown gate {name!r}; known gates: {known}")
    return GATES[key]


def gate_unitary(gate: Gate, params: Sequence[float] = ()) -> UnitaryMatrix:
    """Instantiate a gate at concrete parameter values."""
    return gate.unitary(params)


def u3_angles(matrix) -> tuple[float, float, float]:
    """Euler angles (theta, phi, lam) with U3(theta, phi, lam) == matrix up to
    a global phase.

    Closed form, no optimization: strip the phase of the [0,0] entry (or of
    [1,0] when that entry vanishes) and read the angles off the entries.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    c = abs(m[0, 0])
    s = abs(m[1, 0])
    theta = 2.0 * math.atan2(s, c)
    # The [0,0] entry carries the global phase; fall back to the [1,0] entry
    # when cos(theta/2) is too small for a stable phase read.
    if c > 1e-8:
        ref = m[0, 0] / c
        phi = cmath.phase(m[1, 0] / ref) if s > 1e-8 else 0.0
        lam = (
            cmath.phase(-m[0, 1] / ref)
            if s > 1e-8
            else cmath.phase(m[1, 1] / ref)
        )
    else:
        ref = m[1, 0] / s
        phi = 0.0
        lam = cmath.phase(-m[0, 1] / ref)
    return (theta, phi, lam)
