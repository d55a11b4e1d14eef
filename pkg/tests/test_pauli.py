import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdoped.pauli import PauliString, SignedPauli, commutes, from_symplectic, mul, to_symplectic

from conftest import kron_pauli

LETTERS = "IXYZ"


def paulis(n):
    return st.builds(lambda x, z, k: PauliString(n, x, z, k),
                     st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, 3))


def all_labels(n):
    return ["".join(p) for p in itertools.product(LETTERS, repeat=n)]


def test_x_times_z_is_minus_i_y():
    p = mul(PauliString.from_label("X"), PauliString.from_label("Z"))
    assert (p.x, p.z, p.phase_exp) == (1, 1, 3)


def test_square_is_identity():
    for label in all_labels(2):
        p = PauliString.from_label(label)
        sq = mul(p, p)
        assert sq.is_identity and sq.phase_exp == 0


def test_disjoint_supports():
    p = mul(PauliString.from_label("XI"), PauliString.from_label("IZ"))
    assert p.strict_equal(PauliString.from_label("XZ"))


def test_commutation_examples():
    x, z = PauliString.from_label("X"), PauliString.from_label("Z")
    assert not commutes(x, z)
    assert commutes(x, x)
    assert commutes(PauliString.from_label("XX"), PauliString.from_label("ZZ"))


def test_dimension_errors():
    with pytest.raises(ValueError):
        mul(PauliString.from_label("X"), PauliString.from_label("XX"))
    with pytest.raises(ValueError):
        commutes(PauliString.from_label("X"), PauliString.from_label("XX"))


def test_symplectic_examples():
    assert to_symplectic(PauliString.from_label("Y")).tolist() == [1, 1]
    assert from_symplectic(np.zeros(6, dtype=np.uint8)).is_identity
    with pytest.raises(ValueError):
        from_symplectic([1, 0, 1])


def test_symplectic_round_trip(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        p = PauliString.from_index(n, int(rng.integers(4**n)))
        assert from_symplectic(to_symplectic(p)) == p


@pytest.mark.parametrize("n", [1, 2])
def test_products_match_dense_matrices(n):
    for a, b in itertools.product(all_labels(n), repeat=2):
        for k in range(4):
            p = PauliString.from_label(a)
            p = PauliString(n, p.x, p.z, k)
            q = PauliString.from_label(b)
            assert np.allclose(mul(p, q).to_matrix(), p.to_matrix() @ q.to_matrix())


def test_to_matrix_matches_kron():
    for label in all_labels(3):
        assert np.allclose(PauliString.from_label(label).to_matrix(), kron_pauli(label))


def test_commutes_matches_symplectic_form_exhaustively():
    n = 3
    for i in range(4**n):
        for j in range(4**n):
            p, q = PauliString.from_index(n, i), PauliString.from_index(n, j)
            u, v = to_symplectic(p).astype(int), to_symplectic(q).astype(int)
            form = (u[:n] @ v[n:] + u[n:] @ v[:n]) % 2
            assert commutes(p, q) == (form == 0)


def test_commutes_matches_dense_at_two_qubits():
    for a, b in itertools.product(all_labels(2), repeat=2):
        pa, pb = kron_pauli(a), kron_pauli(b)
        assert commutes(PauliString.from_label(a), PauliString.from_label(b)) == np.allclose(pa @ pb, pb @ pa)


@given(paulis(4), paulis(4), paulis(4))
def test_mul_associative(p, q, r):
    assert mul(mul(p, q), r).strict_equal(mul(p, mul(q, r)))


@given(paulis(5))
def test_identity_is_neutral(p):
    assert mul(p, PauliString.identity(5)).strict_equal(p)
    assert mul(PauliString.identity(5), p).strict_equal(p)


@given(paulis(5))
def test_quotient_equality_ignores_phase(p):
    q = PauliString(p.n, p.x, p.z, (p.phase_exp + 1) % 4)
    assert p == q and hash(p) == hash(q)
    assert not p.strict_equal(q)


def test_label_round_trip():
    for label in ["+XYZI", "-ZZ", "+iY", "-iXI", "I"]:
        p = PauliString.from_label(label)
        assert PauliString.from_label(p.label()).strict_equal(p)
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


def test_signed_pauli():
    s = SignedPauli.from_label("-XZ")
    assert s.sign == -1 and s.pauli == PauliString.from_label("XZ")
    assert (-s).sign == 1
    assert s.as_pauli().strict_equal(PauliString.from_label("-XZ"))
    with pytest.raises(ValueError):
        SignedPauli(PauliString.from_label("XZ"), 3)
