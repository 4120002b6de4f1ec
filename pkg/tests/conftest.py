import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def embed_oracle(gate_mat, loc, num_qubits):
    """Reference embedding of a small gate into the full matrix.

    Deliberately written as an explicit loop over basis states (qubit 0 is
    the most significant bit of the index), independent of the tensor
    contraction used by the package.
    """
    n = num_qubits
    dim = 2**n
    k = len(loc)
    gate_mat = np.asarray(gate_mat)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = 0
        for q in loc:
            sub_in = sub_in * 2 + bits[q]
        for sub_out in range(2**k):
            amp = gate_mat[sub_out, sub_in]
            if amp == 0:
                continue
            new_bits = list(bits)
            for t, q in enumerate(loc):
                new_bits[q] = (sub_out >> (k - 1 - t)) & 1
            row = 0
            for b in new_bits:
                row = row * 2 + b
            out[row, col] += amp
    return out


def circuit_matrix_oracle(circuit):
    """Reference circuit unitary: left-multiply embedded ops in order."""
    dim = 2**circuit.num_qubits
    full = np.eye(dim, dtype=np.complex128)
    for op in circuit.ops:
        full = embed_oracle(op.matrix(), op.location, circuit.num_qubits) @ full
    return full


def phase_distance_oracle(a, b):
    """Reference 1 - |tr(B^dag A)| / N."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return 1.0 - abs(np.trace(b.conj().T @ a)) / a.shape[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
