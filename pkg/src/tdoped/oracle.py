"""Dense statevector ground truth and the query model exposed to learners.

Everything here is exponential in ``n`` on purpose: it is the reference the
learners are checked against.  Amplitude index bit ``q`` is qubit ``q``.

The full table of Pauli expectations is computed with one Walsh-Hadamard
transform per X-pattern: for fixed ``x``,
``<psi| X^x Z^z |psi> = sum_j conj(psi[j ^ x]) (-1)^{z.j} psi[j]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import DopedCircuit
from .pauli import PauliString, SignedPauli, z_signs

__all__ = [
    "ResourceError",
    "ConsistencyError",
    "StateVector",
    "PauliDistribution",
    "QueryModel",
    "run_circuit",
    "pauli_expectation",
    "pauli_expectation_table",
    "conjugate_overlap_table",
    "exact_xi",
    "exact_xi_tilde",
    "stabilizer_group",
    "density_matrix",
    "describe_state",
]

MAX_QUBITS = 12
_SUPPORT_THRESHOLD = 1e-12


class ResourceError(RuntimeError):
    """Requested size exceeds the dense-simulation cap."""


class ConsistencyError(ValueError):
    pass


def _check_size(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise ResourceError(f"{n} qubits exceeds the dense cap of {max_qubits}")


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"state is not normalized (norm = {norm})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n: int) -> StateVector:
        a = np.zeros(1 << n, dtype=complex)
        a[0] = 1
        return cls(n, a)

    @classmethod
    def haar_random(cls, n: int, rng: np.random.Generator) -> StateVector:
        a = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return cls(n, a / np.linalg.norm(a))

    def conj(self) -> StateVector:
        return StateVector(self.n, self.amplitudes.conj())

    @property
    def dim(self) -> int:
        return 1 << self.n


# ---------------------------------------------------------------------------
# circuit simulation

_SQ = 1 / np.sqrt(2)
_T_PHASE = np.exp(1j * np.pi / 4)


def _apply_gate(psi: np.ndarray, kind: str, targets: tuple[int, ...], idx: np.ndarray) -> None:
    a = targets[0]
    bit = 1 << a
    if kind in ("CNOT", "CZ"):
        b = 1 << targets[1]
        sel = idx[(idx & bit) != 0]
        if kind == "CNOT":
            lo = sel[(sel & b) == 0]
            hi = lo | b
            psi[lo], psi[hi] = psi[hi].copy(), psi[lo].copy()
        else:
            psi[sel[(sel & b) != 0]] *= -1
        return
    one = idx[(idx & bit) != 0]
    if kind == "H":
        zero = one ^ bit
        u, v = psi[zero].copy(), psi[one].copy()
        psi[zero] = (u + v) * _SQ
        psi[one] = (u - v) * _SQ
    elif kind == "X":
        zero = one ^ bit
        psi[zero], psi[one] = psi[one].copy(), psi[zero].copy()
    elif kind == "Z":
        psi[one] *= -1
    elif kind == "S":
        psi[one] *= 1j
    elif kind == "S_DAG":
        psi[one] *= -1j
    elif kind == "T":
        psi[one] *= _T_PHASE
    elif kind == "T_DAG":
        psi[one] *= np.conj(_T_PHASE)
    else:  # Gate() already rejects unknown kinds
        raise ValueError(kind)


def run_circuit(c: DopedCircuit, max_qubits: int = MAX_QUBITS, initial: StateVector | None = None) -> StateVector:
    _check_size(c.n, max_qubits)
    psi = (initial or StateVector.zero(c.n)).amplitudes.copy()
    idx = np.arange(1 << c.n)
    for g in c.gates:
        _apply_gate(psi, g.kind, g.targets, idx)
    return StateVector(c.n, psi / np.linalg.norm(psi))


# ---------------------------------------------------------------------------
# expectations


def _check_dims(psi: StateVector, p: PauliString) -> None:
    if psi.n != p.n:
        raise ValueError(f"qubit count mismatch: state {psi.n}, Pauli {p.n}")


def apply_pauli(psi: StateVector, p: PauliString) -> np.ndarray:
    _check_dims(psi, p)
    j = np.arange(psi.dim)
    signs = z_signs(j, p.z)
    out = np.empty_like(psi.amplitudes)
    out[j ^ p.x] = signs * psi.amplitudes
    return out * 1j ** ((p.phase_exp + (p.x & p.z).bit_count()) % 4)


def pauli_expectation(psi: StateVector, p: PauliString) -> float:
    """``tr(P psi)``; ``P`` must be Hermitian (phase +-1)."""
    if not p.is_hermitian:
        raise ValueError(f"{p} is not Hermitian")
    return float(np.vdot(psi.amplitudes, apply_pauli(psi, p)).real)


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    d = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < d:
        a = a.reshape(*lead, d // (2 * h), 2, h)
        a = np.stack((a[..., 0, :] + a[..., 1, :], a[..., 0, :] - a[..., 1, :]), axis=-2)
        h *= 2
    return a.reshape(*lead, d)


def _bilinear_table(bra: np.ndarray, ket: np.ndarray, n: int, chunk: int = 256) -> np.ndarray:
    """``F[z, x] = sum_j conj(bra[j ^ x]) (-1)^{z.j} ket[j]`` for all x, z."""
    d = 1 << n
    j = np.arange(d)
    out = np.empty((d, d), dtype=complex)
    cb = bra.conj()
    for start in range(0, d, chunk):
        xs = np.arange(start, min(d, start + chunk))
        w = cb[xs[:, None] ^ j[None, :]] * ket[None, :]
        out[:, xs] = _fwht(w).T
    return out


def _herm_phase(n: int) -> np.ndarray:
    d = 1 << n
    z = np.arange(d)[:, None]
    x = np.arange(d)[None, :]
    return np.array([1, 1j, -1, -1j])[np.bitwise_count(x & z) % 4]


def pauli_expectation_table(psi: StateVector, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """``tr(P psi)`` for all ``4**n`` Paulis, indexed by ``PauliString.index``."""
    _check_size(psi.n, max_qubits)
    f = _bilinear_table(psi.amplitudes, psi.amplitudes, psi.n)
    return (f * _herm_phase(psi.n)).real.ravel()


def conjugate_overlap_table(psi: StateVector, psi_conj: StateVector | None = None,
                            max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """``|<psi|P|psi*>|`` for all Paulis, indexed by ``PauliString.index``."""
    _check_size(psi.n, max_qubits)
    if psi_conj is None:
        psi_conj = psi.conj()
    elif np.linalg.norm(psi_conj.amplitudes - psi.amplitudes.conj()) > 1e-10:
        raise ConsistencyError("second state is not the complex conjugate of the first")
    return np.abs(_bilinear_table(psi.amplitudes, psi_conj.amplitudes, psi.n)).ravel()


def density_matrix(psi: StateVector) -> np.ndarray:
    return np.outer(psi.amplitudes, psi.amplitudes.conj())


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True, eq=False)
class PauliDistribution:
    """Finite distribution over phase-free Paulis, stored as index/prob arrays."""

    n: int
    indices: np.ndarray
    probs: np.ndarray
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        p = np.asarray(self.probs, dtype=float)
        if idx.shape != p.shape:
            raise ValueError("indices and probabilities differ in length")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if abs(p.sum() - 1) > 1e-10:
            raise ValueError(f"probabilities sum to {p.sum()}")
        if np.unique(idx).size != idx.size:
            raise ValueError("support entries must be distinct")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "probs", p)
        cdf = np.cumsum(p)
        cdf[-1] = 1.0
        object.__setattr__(self, "_cdf", cdf)

    @property
    def support(self) -> list[tuple[PauliString, float]]:
        return [(PauliString.from_index(self.n, int(i)), float(q)) for i, q in zip(self.indices, self.probs)]

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.indices.tolist(), self.probs.tolist()))

    def sample_indices(self, rng: np.random.Generator, size: int) -> np.ndarray:
        pos = np.searchsorted(self._cdf, rng.random(size), side="right")
        return self.indices[np.minimum(pos, self.indices.size - 1)]

    def tv_distance(self, counts: dict[int, int] | np.ndarray) -> float:
        """Total variation between this distribution and empirical counts."""
        if isinstance(counts, np.ndarray):
            keys, c = np.unique(counts, return_counts=True)
            counts = dict(zip(keys.tolist(), c.tolist()))
        total = sum(counts.values())
        exact = self.as_dict()
        keys = set(exact) | set(counts)
        return 0.5 * sum(abs(exact.get(k, 0.0) - counts.get(k, 0) / total) for k in keys)


def _distribution(n: int, probs: np.ndarray) -> PauliDistribution:
    keep = np.flatnonzero(probs > _SUPPORT_THRESHOLD)
    p = probs[keep]
    return PauliDistribution(n, keep, p / p.sum())


def exact_xi(psi: StateVector, max_qubits: int = MAX_QUBITS) -> PauliDistribution:
    """``Xi(P) = tr(P psi)^2 / d``: Bell measurement of ``psi ⊗ psi*``."""
    e = pauli_expectation_table(psi, max_qubits)
    return _distribution(psi.n, e**2 / psi.dim)


def exact_xi_tilde(psi: StateVector, psi_conj: StateVector | None = None,
                   max_qubits: int = MAX_QUBITS) -> PauliDistribution:
    """``|<psi|P|psi*>|^2 / d``: Bell measurement of ``psi ⊗ psi``."""
    a = conjugate_overlap_table(psi, psi_conj, max_qubits)
    return _distribution(psi.n, a**2 / psi.dim)


def stabilizer_group(psi: StateVector, tol: float = 1e-9, table: np.ndarray | None = None) -> list[SignedPauli]:
    """All signed Paulis with ``|tr(P psi)| = 1`` (identity included)."""
    if table is None:
        table = pauli_expectation_table(psi)
    hits = np.flatnonzero(np.abs(np.abs(table) - 1) < tol)
    return [SignedPauli(PauliString.from_index(psi.n, int(i)), 1 if table[i] > 0 else -1) for i in hits]


# ---------------------------------------------------------------------------
# query access


class QueryModel:
    """Simulated copies of ``|psi>`` (and ``|psi*>``) with resource accounting.

    Learners may only call the public sampling/measurement methods.  Each
    Xi-sample consumes one copy of psi and one of psi*, each Xi-tilde sample
    two copies of psi, each measurement shot one copy of psi.
    """

    def __init__(self, state: StateVector, seed: int | None = None, max_qubits: int = MAX_QUBITS):
        _check_size(state.n, max_qubits)
        self._state = state
        self._max_qubits = max_qubits
        self.rng = np.random.default_rng(seed)
        self._xi: PauliDistribution | None = None
        self._xi_tilde: PauliDistribution | None = None
        self._expect: dict[int, float] = {}
        self.xi_samples = 0
        self.xi_tilde_samples = 0
        self.shots = 0
        self.copies_psi = 0
        self.copies_conj = 0

    @classmethod
    def from_circuit(cls, c: DopedCircuit, seed: int | None = None, max_qubits: int = MAX_QUBITS) -> QueryModel:
        return cls(run_circuit(c, max_qubits), seed, max_qubits)

    @property
    def n(self) -> int:
        return self._state.n

    # -- sampling -------------------------------------------------------------
    def _draw(self, dist: PauliDistribution, size: int | None, rng) -> PauliString | list[PauliString]:
        rng = self.rng if rng is None else rng
        idx = dist.sample_indices(rng, 1 if size is None else size)
        ps = [PauliString.from_index(self.n, int(i)) for i in idx]
        return ps[0] if size is None else ps

    def sample_xi(self, size: int | None = None, rng=None):
        if self._xi is None:
            self._xi = exact_xi(self._state, self._max_qubits)
        k = 1 if size is None else size
        self.xi_samples += k
        self.copies_psi += k
        self.copies_conj += k
        return self._draw(self._xi, size, rng)

    def sample_xi_tilde(self, size: int | None = None, rng=None):
        if self._xi_tilde is None:
            self._xi_tilde = exact_xi_tilde(self._state, max_qubits=self._max_qubits)
        k = 1 if size is None else size
        self.xi_tilde_samples += k
        self.copies_psi += 2 * k
        return self._draw(self._xi_tilde, size, rng)

    # -- measurement ------------------------------------------------------------
    def _expectation(self, p: PauliString) -> float:
        key = p.index
        if key not in self._expect:
            self._expect[key] = pauli_expectation(self._state, p.unsigned())
        e = self._expect[key]
        return -e if p.phase_exp == 2 else e

    def measure_shots(self, p: PauliString, shots: int, rng=None) -> np.ndarray:
        """``shots`` single-copy measurements of Hermitian ``p``; array of +-1."""
        if p.n != self.n:
            raise ValueError(f"qubit count mismatch: state {self.n}, Pauli {p.n}")
        if not p.is_hermitian:
            raise ValueError(f"{p} is not Hermitian")
        rng = self.rng if rng is None else rng
        prob_plus = min(1.0, max(0.0, (1 + self._expectation(p)) / 2))
        self.shots += shots
        self.copies_psi += shots
        return np.where(rng.random(shots) < prob_plus, 1, -1).astype(np.int8)

    def measure_pauli_shot(self, p: PauliString, rng=None) -> int:
        return int(self.measure_shots(p, 1, rng)[0])

    def resources(self) -> dict[str, int]:
        return {
            "xi_samples": self.xi_samples,
            "xi_tilde_samples": self.xi_tilde_samples,
            "shots": self.shots,
            "copies_psi": self.copies_psi,
            "copies_conj": self.copies_conj,
        }


def describe_state(psi: StateVector, t: int, tol: float = 1e-9, table: np.ndarray | None = None):
    """Ground-truth :class:`DopedDescription` read off the full expectation table.

    Generators are the first independent stabilizers in index order; each
    coset of the support is represented by its lowest-index member.
    """
    from .f2 import IncrementalBasis
    from .grid import nearest_grid
    from .model import DopedDescription

    if table is None:
        table = pauli_expectation_table(psi)
    basis = IncrementalBasis(2 * psi.n)
    gens = []
    for sp in stabilizer_group(psi, tol, table):
        if basis.add(sp.pauli.index):
            gens.append(sp)
    reps: dict[int, int] = {}
    for i in np.flatnonzero(np.abs(table) > tol):
        key = basis.reduce(int(i))
        if key and key not in reps:
            reps[key] = int(i)
    bad = [(PauliString.from_index(psi.n, i), nearest_grid(float(table[i]), t)) for i in reps.values()]
    return DopedDescription(psi.n, t, tuple(gens), tuple(bad))
