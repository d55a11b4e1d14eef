"""Linear algebra over GF(2) on bit-packed rows.

Each row is a Python int; column ``j`` is bit ``j``.  ``BitMatrix`` is the
immutable container, ``IncrementalBasis`` the mutable elimination structure
the learner feeds one vector at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = ["BitMatrix", "IncrementalBasis", "rref", "in_span", "extract_basis", "pack", "unpack"]


def pack(v: Sequence[int] | np.ndarray) -> int:
    """0/1 sequence -> int, entry ``j`` at bit ``j``."""
    v = np.asarray(v, dtype=np.uint8).ravel()
    out = 0
    for j in np.flatnonzero(v):
        out |= 1 << int(j)
    return out


def unpack(v: int, length: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(length)], dtype=np.uint8)


def _as_row(v, cols: int | None) -> tuple[int, int]:
    if isinstance(v, (int, np.integer)):
        if cols is None:
            raise ValueError("column count required for integer-packed vectors")
        if v < 0 or v >> cols:
            raise ValueError(f"vector does not fit in {cols} columns")
        return int(v), cols
    arr = np.asarray(v).ravel()
    if cols is not None and arr.size != cols:
        raise ValueError(f"vector length {arr.size} != {cols}")
    return pack(arr), arr.size


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise ValueError("negative column count")
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row {r:#x} exceeds {self.cols} columns")

    @classmethod
    def from_array(cls, a) -> BitMatrix:
        a = np.atleast_2d(np.asarray(a, dtype=np.uint8))
        return cls(tuple(pack(row) for row in a), a.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls((0,) * rows, cols)

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = unpack(r, self.cols)
        return out

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def rank(self) -> int:
        return rref(self)[1]

    def __len__(self) -> int:
        return len(self.rows)


def rref(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns (ascending)."""
    rows = list(m.rows)
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        bit = 1 << col
        sel = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return BitMatrix(tuple(rows), m.cols), r, pivots


class IncrementalBasis:
    """Fully reduced basis kept in pivot form for O(rank) insert/membership.

    Every stored row has a distinct pivot (its lowest set bit) and no other
    row contains that pivot bit, so reduction is a single pass.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._rows: dict[int, int] = {}  # pivot bit -> reduced row
        self.kept: list[int] = []  # original vectors that increased the rank
        self.steps = 0  # row XORs performed

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: int) -> int:
        """Canonical representative of ``v`` modulo the span."""
        for bit, row in self._rows.items():
            if v & bit:
                v ^= row
                self.steps += 1
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True iff the rank grew."""
        if v < 0 or v >> self.cols:
            raise ValueError(f"vector does not fit in {self.cols} columns")
        original = v
        v = self.reduce(v)
        if v == 0:
            return False
        bit = v & -v
        for b, row in self._rows.items():
            if row & bit:
                self._rows[b] = row ^ v
                self.steps += 1
        self._rows[bit] = v
        self.kept.append(original)
        return True

    def matrix(self) -> BitMatrix:
        return BitMatrix(tuple(self.kept), self.cols)


def in_span(v, basis: BitMatrix) -> bool:
    row, _ = _as_row(v, basis.cols)
    b = IncrementalBasis(basis.cols)
    for r in basis.rows:
        b.add(r)
    return b.contains(row)


def extract_basis(vectors: Iterable, cols: int | None = None) -> BitMatrix:
    """First-seen maximal independent subset, in input order."""
    b: IncrementalBasis | None = None
    for v in vectors:
        row, width = _as_row(v, cols)
        if b is None:
            cols = width
            b = IncrementalBasis(width)
        b.add(row)
    if b is None:
        return BitMatrix((), cols or 0)
    return b.matrix()
