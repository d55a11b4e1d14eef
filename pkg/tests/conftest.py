import numpy as np
import pytest

from tdoped import StateVector, run_circuit


def dense_unitary(circuit) -> np.ndarray:
    """Column j is the circuit applied to basis state j."""
    d = 1 << circuit.n
    cols = []
    for j in range(d):
        e = np.zeros(d, dtype=complex)
        e[j] = 1
        cols.append(run_circuit(circuit, initial=StateVector(circuit.n, e)).amplitudes)
    return np.stack(cols, axis=1)


def kron_pauli(label: str) -> np.ndarray:
    """Dense matrix built independently with np.kron; qubit 0 is the least significant bit."""
    mats = {
        "I": np.eye(2),
        "X": np.array([[0, 1], [1, 0]]),
        "Y": np.array([[0, -1j], [1j, 0]]),
        "Z": np.diag([1, -1]),
    }
    out = np.eye(1)
    for ch in label:
        out = np.kron(mats[ch], out)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
