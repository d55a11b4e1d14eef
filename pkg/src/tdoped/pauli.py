"""Bit-packed n-qubit Pauli operators.

A Pauli is stored as two Python integers ``x`` and ``z`` whose bit ``q`` is
the X (resp. Z) component on qubit ``q``, plus a phase exponent ``k`` so the
operator is ``i**k * P_1 ⊗ ... ⊗ P_n`` with each ``P_q`` in {I, X, Y, Z}
(Hermitian Y, i.e. ``Y = i X Z``).  Python ints are arbitrary precision, so
every group operation is a handful of word-level XOR/AND/popcount calls.

Text form is one letter per qubit, qubit 0 first, with an optional sign
prefix (``+``, ``-``, ``+i``, ``-i``, ``i``)::

    >>> p = PauliString.from_label("-XIZ")
    >>> p.n, p.x, p.z, p.phase_exp
    (3, 1, 4, 2)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PauliString",
    "SignedPauli",
    "mul",
    "commutes",
    "to_symplectic",
    "from_symplectic",
]

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_PREFIX_PHASE = {"": 0, "+": 0, "-": 2, "i": 1, "+i": 1, "-i": 3}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def z_signs(cols: np.ndarray, z: int) -> np.ndarray:
    """``(-1)^{popcount(col & z)}`` as signed ints."""
    return np.where(np.bitwise_count(cols & z) & 1, -1, 1)


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True, eq=False)
class PauliString:
    """An element of the phased Pauli group.

    ``==`` compares in the quotient group (phase ignored); use
    :meth:`strict_equal` when the phase matters.
    """

    n: int
    x: int = 0
    z: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"qubit count must be non-negative, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"x/z bits exceed {self.n} qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``"±XIZY..."``.  Raises ``ValueError`` on anything else."""
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIX_PHASE:
            raise ValueError(f"bad phase prefix {prefix!r} in {label!r}")
        x = z = 0
        for q, ch in enumerate(body):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(body), x, z, _PREFIX_PHASE[prefix])

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        bx, bz = _LETTER_BITS[letter]
        return cls(n, bx << qubit, bz << qubit)

    @classmethod
    def from_index(cls, n: int, index: int) -> PauliString:
        """Inverse of :attr:`index`: low ``n`` bits are x, high bits are z."""
        mask = (1 << n) - 1
        return cls(n, index & mask, index >> n)

    # -- views --------------------------------------------------------------
    @property
    def index(self) -> int:
        """Phase-free integer key ``x | z << n`` in ``range(4**n)``."""
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def unsigned(self) -> PauliString:
        """Same operator with phase exponent reset to 0."""
        if self.phase_exp == 0:
            return self
        return PauliString(self.n, self.x, self.z)

    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n)
        )

    def label(self, with_sign: bool = True) -> str:
        if not with_sign:
            return self.letters()
        return _PHASE_PREFIX[self.phase_exp] + self.letters()

    def __str__(self) -> str:
        return self.label()

    def __repr__(self) -> str:
        return f"PauliString({self.label()!r})"

    # -- algebra --------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.n == other.n and self.x == other.x and self.z == other.z

    def __hash__(self):
        return hash((self.n, self.x, self.z))

    def strict_equal(self, other: PauliString) -> bool:
        return self == other and self.phase_exp == other.phase_exp

    def __mul__(self, other: PauliString) -> PauliString:
        return mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase_exp + 2)

    def commutes(self, other: PauliString) -> bool:
        return commutes(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix; qubit ``q`` is bit ``q`` of the index."""
        d = 1 << self.n
        cols = np.arange(d)
        rows = cols ^ self.x
        signs = z_signs(cols, self.z)
        phase = 1j ** ((self.phase_exp + _popcount(self.x & self.z)) % 4)
        mat = np.zeros((d, d), dtype=complex)
        mat[rows, cols] = phase * signs
        return mat


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def mul(p: PauliString, q: PauliString) -> PauliString:
    """Group product ``p @ q`` with exact phase."""
    _check_same_n(p, q)
    x = p.x ^ q.x
    z = p.z ^ q.z
    # i^{x.z} X^x Z^z per factor; moving Z^{z_p} past X^{x_q} costs (-1)^{z_p.x_q}
    k = (
        p.phase_exp
        + q.phase_exp
        + _popcount(p.x & p.z)
        + _popcount(q.x & q.z)
        + 2 * _popcount(p.z & q.x)
        - _popcount(x & z)
    )
    return PauliString(p.n, x, z, k)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_same_n(p, q)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) % 2 == 0


def to_symplectic(p: PauliString) -> np.ndarray:
    """Length-``2n`` 0/1 vector ``(x_0..x_{n-1} | z_0..z_{n-1})``."""
    bits = [(p.x >> q) & 1 for q in range(p.n)] + [(p.z >> q) & 1 for q in range(p.n)]
    return np.array(bits, dtype=np.uint8)


def from_symplectic(v: Sequence[int] | np.ndarray) -> PauliString:
    v = np.asarray(v).ravel()
    if v.size % 2:
        raise ValueError(f"symplectic vector must have even length, got {v.size}")
    if np.any((v != 0) & (v != 1)):
        raise ValueError("symplectic vector entries must be 0 or 1")
    n = v.size // 2
    x = sum(int(b) << q for q, b in enumerate(v[:n]))
    z = sum(int(b) << q for q, b in enumerate(v[n:]))
    return PauliString(n, x, z)


@dataclass(frozen=True)
class SignedPauli:
    """A Hermitian Pauli with an explicit ±1 sign (phase exponent of ``pauli`` is 0)."""

    pauli: PauliString
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.pauli.phase_exp:
            p = self.pauli
            if p.phase_exp % 2:
                raise ValueError(f"{p} is not Hermitian")
            object.__setattr__(self, "pauli", p.unsigned())
            object.__setattr__(self, "sign", -self.sign)

    @classmethod
    def from_pauli(cls, p: PauliString) -> SignedPauli:
        if p.phase_exp % 2:
            raise ValueError(f"{p} is not Hermitian")
        return cls(p.unsigned(), 1 if p.phase_exp == 0 else -1)

    @classmethod
    def from_label(cls, label: str) -> SignedPauli:
        return cls.from_pauli(PauliString.from_label(label))

    @property
    def n(self) -> int:
        return self.pauli.n

    def as_pauli(self) -> PauliString:
        p = self.pauli
        return PauliString(p.n, p.x, p.z, 0 if self.sign == 1 else 2)

    def label(self) -> str:
        return ("+" if self.sign == 1 else "-") + self.pauli.letters()

    def __str__(self) -> str:
        return self.label()

    def __repr__(self) -> str:
        return f"SignedPauli({self.label()!r})"

    def __neg__(self) -> SignedPauli:
        return SignedPauli(self.pauli, -self.sign)


def product(paulis: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for p in paulis:
        out = mul(out, p)
    return out
