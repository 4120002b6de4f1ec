"""Dense unitary matrices with construction-time validation.

Qubit 0 is the most significant bit of the basis-state index: for q qubits the
basis state |b0 b1 ... b_{q-1}> has index sum_i b_i * 2**(q - 1 - i).
"""

from __future__ import annotations

import numpy as np

from .errors import NonUnitaryError, ShapeError

# Frobenius-norm tolerance for ||U^dag U - I||.
UNITARY_TOL = 1e-12


class UnitaryMatrix:
    """An immutable complex matrix verified unitary at construction."""

    __slots__ = ("_mat",)

    def __init__(self, matrix, *, _checked: bool = False):
        mat = np.array(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"expected a square matrix, got shape {mat.shape}")
        dim = mat.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise ShapeError(f"dimension {dim} is not a power of two")
        if not _checked:
            err = np.linalg.norm(mat.conj().T @ mat - np.eye(dim))
            if err > UNITARY_TOL:
                raise NonUnitaryError(
                    f"matrix is not unitary: ||U^dag U - I||_F = {err:.3e}"
                )
        mat.setflags(write=False)
        self._mat = mat

    @classmethod
    def identity(cls, num_qubits: int) -> "UnitaryMatrix":
        return cls(np.eye(2**num_qubits, dtype=np.complex128), _checked=True)

    @property
    def matrix(self) -> np.ndarray:
        """The underlying read-only ndarray."""
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self._mat.conj().T, _checked=True)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise ShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return UnitaryMatrix(self._mat @ other._mat, _checked=True)

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self._mat.astype(dtype)
        return self._mat

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


def as_matrix(target) -> np.ndarray:
    """Coerce a UnitaryMatrix or ndarray-like to a complex ndarray."""
    if isinstance(target, UnitaryMatrix):
        return target.matrix
    return np.asarray(target, dtype=np.complex128)
