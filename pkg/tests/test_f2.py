import functools
import itertools
import operator

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from tdoped.f2 import BitMatrix, IncrementalBasis, extract_basis, in_span, pack, rref, unpack


def brute_rank(rows: list[int]) -> int:
    """Size of the span by enumerating all subset sums, as a log2."""
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def span_of(rows: list[int]) -> set[int]:
    return {
        functools.reduce(operator.xor, itertools.compress(rows, mask), 0)
        for mask in itertools.product((0, 1), repeat=len(rows))
    }


def test_small_rank_examples():
    m = BitMatrix.from_array(np.array([[1, 0], [1, 1], [0, 1]]))
    assert rref(m)[1] == 2
    assert rref(BitMatrix.zeros(4, 6))[1] == 0


def test_rref_is_reduced(rng):
    for _ in range(100):
        a = rng.integers(0, 2, size=(20, 12))
        r, rank, pivots = rref(BitMatrix.from_array(a))
        arr = r.to_array()
        assert rank == brute_rank([pack(row) for row in a])
        assert not arr[rank:].any()
        for i, p in enumerate(pivots):
            assert arr[i, p] == 1 and arr[:, p].sum() == 1
        assert pivots == sorted(pivots)


def test_rref_preserves_row_space(rng):
    for _ in range(30):
        a = rng.integers(0, 2, size=(6, 8))
        r, rank, _ = rref(BitMatrix.from_array(a))
        assert span_of(list(r.rows[:rank])) == span_of([pack(x) for x in a])


def test_in_span_examples(rng):
    basis = BitMatrix.from_array(rng.integers(0, 2, size=(5, 10)))
    assert in_span(0, basis)
    assert all(in_span(row, basis) for row in basis.rows)


def test_in_span_matches_enumeration(rng):
    for _ in range(50):
        rows = [int(v) for v in rng.integers(0, 1 << 14, size=10)]
        span = span_of(rows)
        basis = BitMatrix(tuple(rows), 14)
        for v in rng.integers(0, 1 << 14, size=40):
            assert in_span(int(v), basis) == (int(v) in span)


def test_extract_basis_examples():
    assert extract_basis([5, 5], cols=3).rows == (5,)
    assert len(extract_basis([], cols=4)) == 0
    assert extract_basis([1, 2, 3, 4], cols=3).rows == (1, 2, 4)
    assert extract_basis([np.array([1, 0, 1]), np.array([1, 0, 1])]).rows == (5,)


def test_extract_basis_span_equality(rng):
    for _ in range(50):
        vecs = [int(v) for v in rng.integers(0, 1 << 10, size=int(rng.integers(1, 15)))]
        b = extract_basis(vecs, cols=10)
        assert all(in_span(v, b) for v in vecs)
        full = BitMatrix(tuple(vecs), 10)
        assert all(in_span(v, full) for v in b.rows)
        assert len(b) == rref(full)[1]


@given(st.lists(st.integers(0, 255), max_size=12), st.integers(0, 255))
def test_in_span_consistent_with_rank(rows, v):
    b = BitMatrix(tuple(rows), 8)
    grown = BitMatrix(tuple(rows) + (v,), 8)
    assert in_span(v, b) == (rref(grown)[1] == rref(b)[1])


@given(st.lists(st.integers(0, 1023), max_size=15))
def test_incremental_basis_tracks_rank(rows):
    ib = IncrementalBasis(10)
    grew = [ib.add(r) for r in rows]
    assert ib.rank == brute_rank(rows) == sum(grew)
    for r in rows:
        assert ib.contains(r) and ib.reduce(r) == 0


def test_pack_unpack_round_trip(rng):
    for _ in range(100):
        v = rng.integers(0, 2, size=37)
        assert (unpack(pack(v), 37) == v).all()
