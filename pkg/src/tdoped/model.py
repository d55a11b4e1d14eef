"""Algebraic description of a T-doped stabilizer state.

A pure state whose Pauli support is ``S = G ∪ h_1 G ∪ ... ∪ h_k G`` is fully
described by signed generators ``g_j`` of its stabilizer group ``G`` and one
representative ``h_i`` per nontrivial coset together with the exact value
``tr(h_i psi)``:

    psi = (1/d) sum_i tr(h_i psi) h_i prod_j (1 + phi_j g_j),   h_0 = 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .f2 import IncrementalBasis
from .grid import ONE, GridValue, enumerate_grid
from .pauli import PauliString, SignedPauli, commutes, mul, z_signs

__all__ = [
    "DopedDescription",
    "ValidationReport",
    "ValidationError",
    "validate",
    "group_elements",
    "expectation_table",
    "reconstruct_density",
    "chi_distribution",
    "structural_sample_xi",
    "renyi_entropy",
    "stabilizer_entropy",
    "stabilizer_entropy_from_xi",
    "nullity",
    "purity",
    "MAX_DENSE_QUBITS",
]

MAX_DENSE_QUBITS = 10


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class DopedDescription:
    n: int
    t: int
    generators: tuple[SignedPauli, ...] = ()
    bad_generators: tuple[tuple[PauliString, GridValue], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(
            self, "bad_generators", tuple((h.unsigned(), GridValue.coerce(e)) for h, e in self.bad_generators)
        )

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return len(self.bad_generators)

    def cosets(self) -> list[tuple[PauliString, GridValue]]:
        """Coset representatives including ``h_0 = 1`` with expectation 1."""
        return [(PauliString.identity(self.n), ONE), *self.bad_generators]

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "generators": [g.label() for g in self.generators],
            "bad_generators": [
                {"pauli": h.letters(), "expectation": list(e.as_tuple())} for h, e in self.bad_generators
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> DopedDescription:
        gens = tuple(SignedPauli.from_label(s) for s in data["generators"])
        bad = tuple(
            (PauliString.from_label(b["pauli"]), GridValue(*b["expectation"])) for b in data["bad_generators"]
        )
        desc = cls(int(data["n"]), int(data["t"]), gens, bad)
        if any(g.n != desc.n for g in gens) or any(h.n != desc.n for h, _ in bad):
            raise ValueError("Pauli length does not match n")
        return desc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> DopedDescription:
        return cls.from_dict(json.loads(text))


def group_elements(desc: DopedDescription) -> Iterator[PauliString]:
    """All ``2**m`` products of signed generators as phased Paulis (Gray-code order)."""
    g = PauliString.identity(desc.n)
    gens = [s.as_pauli() for s in desc.generators]
    yield g
    for i in range(1, 1 << len(gens)):
        flip = (i & -i).bit_length() - 1
        g = mul(g, gens[flip])
        yield g


def expectation_table(desc: DopedDescription) -> dict[int, GridValue]:
    """``PauliString.index -> tr(P psi)`` for every Pauli in the support."""
    out: dict[int, GridValue] = {}
    group = list(group_elements(desc))
    for h, e in desc.cosets():
        for g in group:
            q = mul(h, g)
            out[q.index] = e if q.phase_exp == 0 else -e
    return out


def purity(desc: DopedDescription) -> GridValue:
    """``(2^m/d) (1 + sum_i e_i^2)``; equals 1 exactly for a complete description."""
    total = ONE
    for _, e in desc.bad_generators:
        total = total + e * e
    return total.scale_pow2(desc.m - desc.n)


@dataclass
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = bool(passed)
        if detail and not passed:
            self.details[name] = detail

    def __str__(self) -> str:
        return "\n".join(
            f"{'PASS' if v else 'FAIL'} {k}" + (f": {self.details[k]}" if k in self.details else "")
            for k, v in self.checks.items()
        )


def validate(desc: DopedDescription) -> ValidationReport:
    rep = ValidationReport()
    n, m, k, t = desc.n, desc.m, desc.k, desc.t
    gens = [g.pauli for g in desc.generators]
    bad = [h for h, _ in desc.bad_generators]

    rep.record("sizes", all(p.n == n for p in gens + bad), "Pauli length differs from n")

    pairs = [(i, j) for i in range(m) for j in range(i + 1, m) if not commutes(gens[i], gens[j])]
    rep.record("generators_commute", not pairs, f"anticommuting pairs {pairs}")

    basis = IncrementalBasis(2 * n)
    independent = all(basis.add(g.index) for g in gens)
    rep.record("generators_independent", independent)
    rep.record("generator_count", n - t <= m <= n, f"m={m} outside [{n - t}, {n}]")

    clash = [(str(h), str(g)) for h in bad for g in gens if not commutes(h, g)]
    rep.record("bad_commute_with_group", not clash, f"{clash[:3]}")

    keys = [basis.reduce(h.index) for h in bad] if independent else []
    disjoint = independent and 0 not in keys and len(set(keys)) == len(keys)
    rep.record("cosets_disjoint", disjoint, "two representatives share a coset (or one lies in G)")

    rep.record("coset_count", k + 1 <= 4**t, f"k+1={k + 1} > 4^t={4**t}")
    rep.record("support_size", (k + 1) << m <= (1 << t) << n, f"|S|=2^m(k+1)={(k + 1) << m} > 2^t d")

    vals = [e for _, e in desc.bad_generators]
    rep.record("expectations_in_range", all(e and abs(e) < ONE for e in vals), "need 0 < |e| < 1")
    if t <= 12:
        allowed = set(enumerate_grid(t))
        rep.record("expectations_on_grid", all(e in allowed for e in vals), "value outside the t-grid")

    p = purity(desc)
    rep.record("purity", p == ONE, f"purity {p} = {float(p):.12f}")
    return rep


def _pauli_dense_add(rho: np.ndarray, p: PauliString, coeff: float) -> None:
    d = rho.shape[0]
    cols = np.arange(d)
    signs = z_signs(cols, p.z)
    phase = 1j ** ((p.phase_exp + (p.x & p.z).bit_count()) % 4)
    rho[cols ^ p.x, cols] += coeff * phase * signs


def reconstruct_density(desc: DopedDescription) -> np.ndarray:
    if desc.n > MAX_DENSE_QUBITS:
        from .oracle import ResourceError

        raise ResourceError(f"dense reconstruction capped at {MAX_DENSE_QUBITS} qubits")
    d = 1 << desc.n
    rho = np.zeros((d, d), dtype=complex)
    for idx, e in expectation_table(desc).items():
        _pauli_dense_add(rho, PauliString.from_index(desc.n, idx), float(e) / d)
    return rho


def chi_distribution(desc: DopedDescription) -> list[tuple[PauliString, GridValue]]:
    """Coset weights ``tr(h_i psi)^2 |G| / d`` as exact grid values."""
    shift = desc.m - desc.n
    return [(h, (e * e).scale_pow2(shift)) for h, e in desc.cosets()]


def structural_sample_xi(desc: DopedDescription, rng: np.random.Generator, size: int | None = None,
                         check: bool = True):
    """Sample Xi from the description: pick a coset by chi, then a uniform group element."""
    if check:
        rep = validate(desc)
        if not rep.ok:
            raise ValidationError(f"invalid description: {rep.failures()}")
    chi = chi_distribution(desc)
    probs = np.array([float(p) for _, p in chi])
    probs /= probs.sum()
    gens = [g.pauli for g in desc.generators]
    k = 1 if size is None else size
    picks = rng.choice(len(chi), size=k, p=probs)
    bits = rng.integers(0, 2, size=(k, len(gens)))
    out = []
    for c, row in zip(picks, bits):
        x, z = chi[c][0].x, chi[c][0].z
        for g, b in zip(gens, row):
            if b:
                x ^= g.x
                z ^= g.z
        out.append(PauliString(desc.n, x, z))
    return out[0] if size is None else out


def renyi_entropy(probs: Sequence[float] | np.ndarray, alpha: float) -> float:
    """Rényi entropy in bits; ``alpha`` = 1 is Shannon, ``inf`` is min-entropy."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if alpha == 0:
        return math.log2(p.size)
    if alpha == 1:
        return float(-np.sum(p * np.log2(p)))
    if math.isinf(alpha):
        return float(-np.log2(p.max()))
    return float(np.log2(np.sum(p**alpha)) / (1 - alpha))


def nullity(desc: DopedDescription) -> int:
    return desc.n - desc.m


def stabilizer_entropy(desc: DopedDescription, alpha: float) -> float:
    """``M_alpha`` from the coset weights: ``E_alpha(chi) - nullity``."""
    return renyi_entropy([float(p) for _, p in chi_distribution(desc)], alpha) - nullity(desc)


def stabilizer_entropy_from_xi(probs: Sequence[float] | np.ndarray, n: int, alpha: float) -> float:
    """``M_alpha`` from the full characteristic distribution: ``S_alpha(Xi) - n``."""
    return renyi_entropy(probs, alpha) - n
