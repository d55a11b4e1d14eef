import math
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdoped.clifford import random_doped_circuit
from tdoped.grid import (
    ONE,
    ZERO,
    AmbiguousEstimateError,
    GridValue,
    delta_lower_bound,
    enumerate_grid,
    grid_gap,
    nearest_grid,
)
from tdoped.oracle import pauli_expectation_table, run_circuit

getcontext().prec = 60
SQRT2 = Decimal(2).sqrt()
R2 = 1 / math.sqrt(2)


def exact(v: GridValue) -> Decimal:
    return (v.a + v.b * SQRT2) / SQRT2**v.t


grid_values = st.builds(GridValue, st.integers(-50, 50), st.integers(-50, 50), st.integers(0, 8))


def test_canonical_form():
    assert GridValue(1, 0, 1).as_tuple() == (1, 0, 1)
    assert GridValue(0, 1, 1) == ONE
    assert GridValue(2, 0, 2) == ONE
    assert GridValue(4, 2, 3).as_tuple() == (1, 1, 0)
    assert GridValue(2, 3, 3).as_tuple() == (3, 1, 2)
    assert GridValue(0, 0, 5).as_tuple() == (0, 0, 0)
    with pytest.raises(ValueError):
        GridValue(1, 0, -1)


@given(grid_values, grid_values)
def test_arithmetic_against_high_precision(u, v):
    tol = Decimal(10) ** -40
    assert abs(exact(u * v) - exact(u) * exact(v)) < tol
    assert abs(exact(u + v) - (exact(u) + exact(v))) < tol
    assert abs(exact(u - v) - (exact(u) - exact(v))) < tol
    assert (u < v) == (exact(u) < exact(v))
    assert (u == v) == (abs(exact(u) - exact(v)) < tol)
    assert u.sign() == (exact(u) > 0) - (exact(u) < 0)


def test_arithmetic_ten_thousand_pairs(rng):
    tol = Decimal(10) ** -40
    for a, b, t, c, d, s in rng.integers(-30, 31, size=(10_000, 6)):
        u, v = GridValue(int(a), int(b), abs(int(t)) % 7), GridValue(int(c), int(d), abs(int(s)) % 7)
        sq = (u + v) * (u + v)
        assert abs(exact(sq) - (exact(u) + exact(v)) ** 2) < tol


@given(grid_values, st.integers(-4, 4))
def test_scale_and_conjugate(v, k):
    assert abs(exact(v.scale_pow2(k)) - exact(v) * Decimal(2) ** k) < Decimal(10) ** -40
    assert v.galois_conjugate().galois_conjugate() == v
    w = v.galois_conjugate()
    assert abs(exact(w) - (v.a - v.b * SQRT2) / (-SQRT2) ** v.t) < Decimal(10) ** -40


def test_delta_lower_bound_values():
    assert delta_lower_bound(1) == pytest.approx(0.04882, abs=1e-5)
    assert delta_lower_bound(0) == pytest.approx(math.sqrt(2) / 6)
    with pytest.raises(ValueError):
        delta_lower_bound(-1)


def test_small_grids():
    assert [float(v) for v in enumerate_grid(0)] == [-1, 0, 1]
    assert np.allclose([float(v) for v in enumerate_grid(1)], [-1, -R2, 0, R2, 1])
    assert grid_gap(0) == 1
    assert grid_gap(1) == pytest.approx(1 - R2)
    assert grid_gap(1) / 2 == pytest.approx(0.146, abs=1e-3)


def test_grid_properties():
    for t in range(9):
        g = enumerate_grid(t)
        assert all(abs(v) <= ONE and abs(v.galois_conjugate()) <= ONE for v in g)
        assert set(enumerate_grid(max(t - 1, 0))) <= set(g)
        assert ZERO in g and ONE in g and -ONE in g
        assert grid_gap(t) >= delta_lower_bound(t)
    with pytest.raises(ValueError):
        enumerate_grid(13)


def test_doped_expectations_lie_on_grid(rng):
    for _ in range(40):
        t = int(rng.integers(0, 5))
        n = int(rng.integers(1, 5))
        table = pauli_expectation_table(run_circuit(random_doped_circuit(n, t, rng)))
        values = np.array([float(v) for v in enumerate_grid(t)])
        assert np.abs(table[:, None] - values[None, :]).min(axis=1).max() < 1e-9


def test_nearest_grid():
    assert nearest_grid(0.705, 1) == GridValue(1, 0, 1)
    assert float(nearest_grid(0.705, 1)) == pytest.approx(R2)
    assert nearest_grid(-0.98, 2) == -ONE
    with pytest.raises(AmbiguousEstimateError):
        nearest_grid((1 + R2) / 2, 1)
    assert nearest_grid(0.4, 0) == ZERO
    with pytest.raises(AmbiguousEstimateError):
        nearest_grid(0.5, 0)


@given(st.integers(0, 6), st.data())
def test_nearest_grid_recovers_perturbed_points(t, data):
    g = enumerate_grid(t)
    v = data.draw(st.sampled_from(g))
    eps = data.draw(st.floats(-0.49, 0.49)) * grid_gap(t)
    assert nearest_grid(float(v) + eps, t) == v


def test_str():
    assert [str(v) for v in (GridValue(1, 0, 1), GridValue(-1, 0, 2), GridValue(1, -1, 3), GridValue(0, 2))] == [
        "1/√2", "-1/2", "(1-√2)/2√2", "2√2"]
