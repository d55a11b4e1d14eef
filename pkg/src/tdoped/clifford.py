"""Clifford(+T) circuits, Pauli conjugation, tableaux and diagonalizers.

Conjugation works directly on the packed ``(x, z)`` integers of a Pauli with a
sign bit, gate by gate, following the usual CHP update rules.  Qubit ``q`` is
bit ``q`` everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .f2 import IncrementalBasis
from .pauli import PauliString, SignedPauli, commutes

__all__ = [
    "Gate",
    "CliffordCircuit",
    "DopedCircuit",
    "Tableau",
    "CLIFFORD_KINDS",
    "DOPED_KINDS",
    "UnsupportedGateError",
    "InvalidGroupError",
    "TableauError",
    "conjugate_pauli",
    "tableau_from_circuit",
    "circuit_from_tableau",
    "build_diagonalizer",
    "conjugate_circuit",
    "random_clifford_circuit",
    "random_doped_circuit",
    "parse_circuit",
    "format_circuit",
]

CLIFFORD_KINDS = frozenset({"H", "S", "S_DAG", "CNOT", "CZ", "X", "Z"})
NON_CLIFFORD_KINDS = frozenset({"T", "T_DAG"})
DOPED_KINDS = CLIFFORD_KINDS | NON_CLIFFORD_KINDS
TWO_QUBIT = frozenset({"CNOT", "CZ"})
_INVERSE = {"S": "S_DAG", "S_DAG": "S", "T": "T_DAG", "T_DAG": "T"}


class UnsupportedGateError(ValueError):
    pass


class InvalidGroupError(ValueError):
    """Generators are dependent or fail to commute."""


class TableauError(ValueError):
    """Tableau rows do not define a symplectic map."""


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in DOPED_KINDS:
            raise UnsupportedGateError(f"unknown gate {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind} takes {arity} target(s), got {self.targets}")
        if arity == 2 and self.targets[0] == self.targets[1]:
            raise ValueError(f"{self.kind} targets must differ")
        if min(self.targets) < 0:
            raise ValueError("negative qubit index")

    def inverse(self) -> Gate:
        return Gate(_INVERSE.get(self.kind, self.kind), self.targets)

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.targets)])


def _check_gates(n: int, gates: Sequence[Gate], allowed) -> tuple[Gate, ...]:
    gates = tuple(gates)
    for g in gates:
        if g.kind not in allowed:
            raise UnsupportedGateError(f"gate {g.kind} not allowed here")
        if max(g.targets) >= n:
            raise ValueError(f"{g} acts outside {n} qubits")
    return gates


@dataclass(frozen=True)
class DopedCircuit:
    """Clifford+T gate list acting on ``|0^n>``."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", _check_gates(self.n, self.gates, DOPED_KINDS))

    @property
    def t(self) -> int:
        return sum(g.kind in NON_CLIFFORD_KINDS for g in self.gates)

    def inverse(self) -> DopedCircuit:
        return DopedCircuit(self.n, tuple(g.inverse() for g in reversed(self.gates)))

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class CliffordCircuit(DopedCircuit):
    def __post_init__(self):
        object.__setattr__(self, "gates", _check_gates(self.n, self.gates, CLIFFORD_KINDS))

    def inverse(self) -> CliffordCircuit:
        return CliffordCircuit(self.n, tuple(g.inverse() for g in reversed(self.gates)))

    def then(self, other: CliffordCircuit) -> CliffordCircuit:
        return CliffordCircuit(self.n, self.gates + other.gates)


# ---------------------------------------------------------------------------
# conjugation


def _conj_gate(kind: str, tg: tuple[int, ...], x: int, z: int, s: int) -> tuple[int, int, int]:
    """One step of P -> G P G^dagger on (x, z, sign bit)."""
    a = tg[0]
    xa = (x >> a) & 1
    za = (z >> a) & 1
    if kind == "H":
        s ^= xa & za
        if xa != za:
            x ^= 1 << a
            z ^= 1 << a
    elif kind == "S":
        s ^= xa & za
        z ^= xa << a
    elif kind == "S_DAG":
        s ^= xa & (za ^ 1)
        z ^= xa << a
    elif kind == "X":
        s ^= za
    elif kind == "Z":
        s ^= xa
    elif kind == "CNOT":
        b = tg[1]
        xb = (x >> b) & 1
        zb = (z >> b) & 1
        s ^= xa & zb & (xb ^ za ^ 1)
        x ^= xa << b
        z ^= zb << a
    elif kind == "CZ":
        b = tg[1]
        xb = (x >> b) & 1
        zb = (z >> b) & 1
        s ^= xa & xb & (za ^ zb)
        z ^= (xb << a) | (xa << b)
    else:
        raise UnsupportedGateError(f"cannot conjugate through {kind}")
    return x, z, s


def _conj_bits(gates: Iterable[Gate], x: int, z: int, s: int) -> tuple[int, int, int]:
    for g in gates:
        x, z, s = _conj_gate(g.kind, g.targets, x, z, s)
    return x, z, s


def conjugate_pauli(c: CliffordCircuit, p: SignedPauli, direction: str = "forward") -> SignedPauli:
    """``C P C^dagger`` (forward) or ``C^dagger P C`` (inverse), sign exact."""
    if isinstance(p, PauliString):
        p = SignedPauli.from_pauli(p)
    if p.n != c.n:
        raise ValueError(f"qubit count mismatch: circuit {c.n}, Pauli {p.n}")
    if direction == "forward":
        gates: Iterable[Gate] = c.gates
    elif direction == "inverse":
        gates = (g.inverse() for g in reversed(c.gates))
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    x, z, s = _conj_bits(gates, p.pauli.x, p.pauli.z, 0 if p.sign == 1 else 1)
    return SignedPauli(PauliString(c.n, x, z), -1 if s else 1)


# ---------------------------------------------------------------------------
# tableaux


@dataclass(frozen=True)
class Tableau:
    """Images of ``X_i`` and ``Z_i`` under ``P -> U P U^dagger``."""

    n: int
    x_images: tuple[SignedPauli, ...]
    z_images: tuple[SignedPauli, ...]

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise TableauError("need exactly n X-images and n Z-images")
        rows = self.x_images + self.z_images
        if any(r.n != self.n for r in rows):
            raise TableauError("image qubit count mismatch")
        n = self.n
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                expect_anti = j == i + n
                if commutes(rows[i].pauli, rows[j].pauli) == expect_anti:
                    raise TableauError(f"commutation broken between rows {i} and {j}")

    @classmethod
    def identity(cls, n: int) -> Tableau:
        xs = tuple(SignedPauli(PauliString.single(n, q, "X")) for q in range(n))
        zs = tuple(SignedPauli(PauliString.single(n, q, "Z")) for q in range(n))
        return cls(n, xs, zs)

    def apply(self, p: SignedPauli) -> SignedPauli:
        """Image of an arbitrary signed Pauli under the tableau's map."""
        out = PauliString.identity(self.n)
        pp = p.pauli
        # P = i^{x.z} prod X^x prod Z^z, images multiply in the same order
        for q in range(self.n):
            if (pp.x >> q) & 1:
                out = out * self.x_images[q].as_pauli()
        for q in range(self.n):
            if (pp.z >> q) & 1:
                out = out * self.z_images[q].as_pauli()
        out = PauliString(self.n, out.x, out.z, out.phase_exp + (pp.x & pp.z).bit_count())
        signed = SignedPauli.from_pauli(out)
        return signed if p.sign == 1 else -signed

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        same = lambda a, b: a.pauli == b.pauli and a.sign == b.sign  # noqa: E731
        return self.n == other.n and all(
            same(a, b) for a, b in zip(self.x_images + self.z_images, other.x_images + other.z_images)
        )

    __hash__ = None


def tableau_from_circuit(c: CliffordCircuit) -> Tableau:
    xs = tuple(conjugate_pauli(c, SignedPauli(PauliString.single(c.n, q, "X"))) for q in range(c.n))
    zs = tuple(conjugate_pauli(c, SignedPauli(PauliString.single(c.n, q, "Z"))) for q in range(c.n))
    return Tableau(c.n, xs, zs)


class _Reducer:
    """Applies gates to a set of tracked (x, z, sign) rows and records them."""

    def __init__(self, n: int, rows: list[list[int]]):
        self.n = n
        self.rows = rows
        self.gates: list[Gate] = []

    def __call__(self, kind: str, *targets: int) -> None:
        g = Gate(kind, targets)
        self.gates.append(g)
        for r in self.rows:
            r[0], r[1], r[2] = _conj_gate(kind, g.targets, r[0], r[1], r[2])

    def swap(self, a: int, b: int) -> None:
        self("CNOT", a, b)
        self("CNOT", b, a)
        self("CNOT", a, b)


def _bit(v: int, q: int) -> int:
    return (v >> q) & 1


def circuit_from_tableau(tab: Tableau) -> CliffordCircuit:
    """Synthesize a circuit with exactly the tableau's action (O(n^2) gates).

    Gates ``V`` are found that reduce the tableau to the identity; the
    result is ``V^dagger``.
    """
    n = tab.n
    rows = [[r.pauli.x, r.pauli.z, 0 if r.sign == 1 else 1] for r in tab.x_images + tab.z_images]
    red = _Reducer(n, rows)
    for i in range(n):
        xr = rows[i]
        # X-image of qubit i -> X_i
        if not any(_bit(xr[0], j) for j in range(i, n)):
            j = next((j for j in range(i, n) if _bit(xr[1], j)), None)
            if j is None:
                raise TableauError("X-image is trivial on remaining qubits")
            red("H", j)
        if not _bit(xr[0], i):
            j = next(j for j in range(i + 1, n) if _bit(xr[0], j))
            red.swap(i, j)
        for j in range(i + 1, n):
            if _bit(xr[0], j):
                red("CNOT", i, j)
        if _bit(xr[1], i):
            red("S", i)
        for j in range(i + 1, n):
            if _bit(xr[1], j):
                red("CZ", i, j)
        # Z-image of qubit i -> Z_i, keeping X_i fixed
        zr = rows[n + i]
        for j in range(i + 1, n):
            if _bit(zr[0], j):
                if _bit(zr[1], j):
                    red("S", j)
                red("H", j)
        for j in range(i + 1, n):
            if _bit(zr[1], j):
                red("CNOT", j, i)
        if _bit(zr[0], i):
            red("H", i)
            red("S", i)
            red("H", i)
    for i in range(n):
        if rows[i][2]:
            red("Z", i)
        if rows[n + i][2]:
            red("X", i)
    for i in range(n):
        if rows[i][:2] != [1 << i, 0] or rows[n + i][:2] != [0, 1 << i] or rows[i][2] or rows[n + i][2]:
            raise TableauError("reduction did not reach the identity")
    return CliffordCircuit(n, red.gates).inverse()


# ---------------------------------------------------------------------------
# diagonalizer


def _check_group(gens: Sequence[SignedPauli], n: int) -> None:
    basis = IncrementalBasis(2 * n)
    for i, g in enumerate(gens):
        if g.n != n:
            raise InvalidGroupError(f"generator {g} is not on {n} qubits")
        if not basis.add(g.pauli.index):
            raise InvalidGroupError(f"generator {g} is dependent on earlier ones")
        for h in gens[:i]:
            if not commutes(g.pauli, h.pauli):
                raise InvalidGroupError(f"{g} and {h} anticommute")


def build_diagonalizer(gens: Sequence[SignedPauli], n: int) -> CliffordCircuit:
    """Clifford ``D`` with ``D g_i D^dagger = +Z_i`` for every generator.

    Generators are processed in order; gates used for generator ``i`` act
    trivially on ``Z_0..Z_{i-1}`` so earlier images stay put.
    """
    gens = list(gens)
    _check_group(gens, n)
    rows = [[g.pauli.x, g.pauli.z, 0 if g.sign == 1 else 1] for g in gens]
    red = _Reducer(n, rows)
    for i, r in enumerate(rows):
        if not any(_bit(r[0], j) for j in range(i, n)):
            j = next((j for j in range(i, n) if _bit(r[1], j)), None)
            if j is None:  # unreachable after the independence check
                raise InvalidGroupError(f"generator {i} is dependent")
            red("H", j)
        if not _bit(r[0], i):
            j = next(j for j in range(i + 1, n) if _bit(r[0], j))
            red.swap(i, j)
        for j in range(i + 1, n):
            if _bit(r[0], j):
                red("CNOT", i, j)
        if _bit(r[1], i):
            red("S", i)
        for j in range(n):
            if j != i and _bit(r[1], j):
                red("CZ", i, j)
        red("H", i)
        if r[2]:
            red("X", i)
    return CliffordCircuit(n, red.gates)


# ---------------------------------------------------------------------------
# complex conjugation


def conjugate_circuit(c: DopedCircuit) -> DopedCircuit:
    """Circuit preparing ``|psi*>`` from ``|0^n>`` when ``c`` prepares ``|psi>``."""
    out: list[Gate] = []
    for g in c.gates:
        if g.kind == "S":
            out.append(Gate("S_DAG", g.targets))
        elif g.kind == "S_DAG":
            out.append(Gate("S", g.targets))
        elif g.kind == "T":
            out += [Gate("T", g.targets), Gate("S_DAG", g.targets)]
        elif g.kind == "T_DAG":
            out += [Gate("T_DAG", g.targets), Gate("S", g.targets)]
        elif g.kind in ("H", "X", "Z", "CNOT", "CZ"):
            out.append(g)
        else:
            raise UnsupportedGateError(f"cannot conjugate gate {g.kind}")
    return DopedCircuit(c.n, tuple(out))


# ---------------------------------------------------------------------------
# random instances

_ONE_QUBIT = ("H", "S", "S_DAG", "X", "Z")


def random_clifford_circuit(n: int, rng: np.random.Generator, num_gates: int | None = None) -> CliffordCircuit:
    return CliffordCircuit(n, tuple(_random_clifford_gates(n, rng, num_gates)))


def _random_clifford_gates(n: int, rng: np.random.Generator, num_gates: int | None) -> list[Gate]:
    if num_gates is None:
        num_gates = 3 * n * n + 4 * n
    gates = []
    for _ in range(num_gates):
        if n > 1 and rng.random() < 0.4:
            a, b = (int(q) for q in rng.choice(n, size=2, replace=False))
            gates.append(Gate("CNOT" if rng.random() < 0.75 else "CZ", (a, b)))
        else:
            gates.append(Gate(_ONE_QUBIT[rng.integers(len(_ONE_QUBIT))], (int(rng.integers(n)),)))
    return gates


def random_doped_circuit(n: int, t: int, rng: np.random.Generator, block: int | None = None) -> DopedCircuit:
    """Random Clifford blocks interleaved with ``t`` T gates on random qubits."""
    if block is None:
        block = 2 * n * n + 3 * n
    gates = _random_clifford_gates(n, rng, block)
    for _ in range(t):
        gates.append(Gate("T", (int(rng.integers(n)),)))
        gates += _random_clifford_gates(n, rng, block)
    return DopedCircuit(n, tuple(gates))


# ---------------------------------------------------------------------------
# text format


def format_circuit(c: DopedCircuit) -> str:
    lines = [f"QUBITS {c.n}"] + [str(g) for g in c.gates]
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> DopedCircuit:
    """Parse the one-gate-per-line format; ``#`` starts a comment."""
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "QUBITS" or len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'QUBITS <n>' header")
            n = int(parts[1])
            continue
        try:
            gates.append(Gate(parts[0], tuple(int(p) for p in parts[1:])))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'QUBITS <n>' header")
    return DopedCircuit(n, tuple(gates))
