"""Exception types shared across the package."""


class QForgeError(Exception):
    """Base class for all library errors."""


class ArityError(QForgeError, ValueError):
    """Wrong number of parameters or qubits handed to a gate or operation."""


class NonUnitaryError(QForgeError, ValueError):
    """Matrix failed the unitarity check at construction."""


class ShapeError(QForgeError, ValueError):
    """Operands have incompatible dimensions."""


class CapacityError(QForgeError):
    """Requested dense unitary exceeds the materialization cap."""


class BoundsError(QForgeError, IndexError):
    """Circuit edit index out of range."""


class PartitionError(QForgeError):
    """Circuit cannot be partitioned at the requested block size."""


class ConsistencyError(QForgeError):
    """Partition blocks do not tile the original circuit."""


class RetargetError(QForgeError):
    """Retargeting could not rewrite a region within the distance threshold."""

    def __init__(self, message, span=None, qubits=None):
        super().__init__(message)
        self.span = span
        self.qubits = qubits


class PipelineError(QForgeError, ValueError):
    """Invalid pass pipeline description."""


class PairingError(QForgeError, ValueError):
    """Mismatched section pair handed to upper-bound verification."""


class QasmError(QForgeError):
    """Base for OpenQASM reading problems; carries a source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class QasmSyntaxError(QasmError):
    """Malformed OpenQASM source."""


class UnsupportedFeatureError(QasmError):
    """Well-formed OpenQASM using a construct outside the supported subset."""


class EmitError(QForgeError):
    """Circuit contains a gate with no OpenQASM spelling."""
