"""Exact expectation values of T-doped states: ``(a + b*sqrt2) / sqrt2**t``.

A state built with ``t`` T gates has every Pauli expectation in this set
(T conjugation splits a Pauli into two with weight ``1/sqrt2``, and
stabilizer expectations are 0 or +-1).  The Galois map ``sqrt2 -> -sqrt2``
sends the cyclotomic amplitudes of a Clifford+T state to those of another
Clifford+T state (T -> ZT, H -> -H), so the conjugate value is also an
expectation and obeys ``|.| <= 1``.  :func:`enumerate_grid` keeps exactly the
points satisfying both bounds.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering

__all__ = [
    "GridValue",
    "AmbiguousEstimateError",
    "delta_lower_bound",
    "enumerate_grid",
    "grid_gap",
    "nearest_grid",
    "MAX_GRID_T",
]

SQRT2 = math.sqrt(2.0)
MAX_GRID_T = 12


class AmbiguousEstimateError(ValueError):
    """An estimate is not within half a grid gap of any grid point."""

    def __init__(self, x: float, t: int, gap: float):
        super().__init__(f"estimate {x:.6f} is ambiguous on the t={t} grid (gap {gap:.6f})")
        self.x = x
        self.t = t
        self.gap = gap


def _nonneg(c: int, e: int) -> bool:
    """Exact test of ``c + e*sqrt2 >= 0``."""
    if c >= 0 and e >= 0:
        return True
    if c <= 0 and e <= 0:
        return c == 0 and e == 0
    if c > 0:  # e < 0
        return c * c >= 2 * e * e
    return 2 * e * e >= c * c  # c < 0 < e


@total_ordering
@dataclass(frozen=True)
class GridValue:
    """Exact ``(a + b*sqrt2) / sqrt2**t`` kept in canonical (minimal ``t``) form."""

    a: int
    b: int = 0
    t: int = 0

    def __post_init__(self):
        a, b, t = int(self.a), int(self.b), int(self.t)
        if t < 0:
            raise ValueError("scale exponent must be non-negative")
        if a == 0 and b == 0:
            t = 0
        # (2a' + b*sqrt2)/sqrt2^t == (b + a'*sqrt2)/sqrt2^(t-1)
        while t > 0 and a % 2 == 0:
            a, b, t = b, a // 2, t - 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", t)

    @classmethod
    def coerce(cls, v) -> GridValue:
        if isinstance(v, GridValue):
            return v
        if isinstance(v, int):
            return cls(v)
        raise TypeError(f"cannot use {type(v).__name__} as a GridValue")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.t)

    def _lift(self, t: int) -> tuple[int, int]:
        """Numerator over ``sqrt2**t`` for ``t >= self.t``."""
        a, b = self.a, self.b
        for _ in range(t - self.t):
            a, b = 2 * b, a
        return a, b

    def __float__(self) -> float:
        return (self.a + self.b * SQRT2) / SQRT2**self.t

    def __add__(self, other):
        other = GridValue.coerce(other)
        t = max(self.t, other.t)
        a1, b1 = self._lift(t)
        a2, b2 = other._lift(t)
        return GridValue(a1 + a2, b1 + b2, t)

    __radd__ = __add__

    def __neg__(self):
        return GridValue(-self.a, -self.b, self.t)

    def __sub__(self, other):
        return self + (-GridValue.coerce(other))

    def __rsub__(self, other):
        return GridValue.coerce(other) - self

    def __mul__(self, other):
        other = GridValue.coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return GridValue(a * c + 2 * b * d, a * d + b * c, self.t + other.t)

    __rmul__ = __mul__

    def scale_pow2(self, k: int) -> GridValue:
        """``self * 2**k`` for any integer ``k``."""
        if k >= 0:
            return GridValue(self.a << k, self.b << k, self.t)
        return GridValue(self.a, self.b, self.t - 2 * k)

    def sign(self) -> int:
        if self.a == 0 and self.b == 0:
            return 0
        return 1 if _nonneg(self.a, self.b) else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        try:
            other = GridValue.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self):
        return self.sign() != 0

    def galois_conjugate(self) -> GridValue:
        """Image under ``sqrt2 -> -sqrt2``."""
        s = -1 if self.t % 2 else 1
        return GridValue(s * self.a, -s * self.b, self.t)

    def __str__(self) -> str:
        coeff = {1: "", -1: "-"}.get(self.b, str(self.b))
        if self.b == 0:
            num = str(self.a)
        elif self.a == 0:
            num = f"{coeff}√2"
        else:
            num = f"({self.a}{'+' if self.b > 0 else ''}{coeff}√2)"
        if self.t == 0:
            return num
        half, odd = divmod(self.t, 2)
        den = ("" if half == 0 else str(1 << half)) + ("√2" if odd else "")
        return f"{num}/{den}"


ZERO = GridValue(0)
ONE = GridValue(1)


def delta_lower_bound(t: int) -> float:
    """Worst-case spacing of distinct Pauli expectations with ``t`` T gates."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return SQRT2 / 6 * (1 / SQRT2 - 0.5) ** t


def _admissible(a: int, b: int, t: int) -> bool:
    # |a +- b*sqrt2| <= sqrt2^t  <=>  (2^t - a^2 - 2b^2) -+ 2ab*sqrt2 >= 0
    c = (1 << t) - a * a - 2 * b * b
    return _nonneg(c, -2 * a * b) and _nonneg(c, 2 * a * b)


@lru_cache(maxsize=None)
def _grid(t: int) -> tuple[tuple[GridValue, ...], tuple[float, ...]]:
    if not 0 <= t <= MAX_GRID_T:
        raise ValueError(f"grid enumeration supports 0 <= t <= {MAX_GRID_T}, got {t}")
    amax = math.isqrt(1 << t)
    bmax = math.isqrt(1 << max(t - 1, 0)) + 1
    pts = set()
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            if _admissible(a, b, t):
                pts.add(GridValue(a, b, t))
    ordered = sorted(pts, key=float)
    return tuple(ordered), tuple(float(v) for v in ordered)


def enumerate_grid(t: int) -> list[GridValue]:
    """All admissible expectation values for ``t`` T gates, ascending."""
    return list(_grid(t)[0])


@lru_cache(maxsize=None)
def grid_gap(t: int) -> float:
    vals = _grid(t)[1]
    return min(b - a for a, b in zip(vals, vals[1:]))


def nearest_grid(x: float, t: int) -> GridValue:
    """Snap ``x`` to the unique grid point closer than half the grid gap."""
    pts, vals = _grid(t)
    gap = grid_gap(t)
    i = bisect.bisect_left(vals, x)
    best = min((j for j in (i - 1, i) if 0 <= j < len(vals)), key=lambda j: abs(vals[j] - x))
    if abs(vals[best] - x) >= gap / 2:
        raise AmbiguousEstimateError(x, t, gap)
    return pts[best]
