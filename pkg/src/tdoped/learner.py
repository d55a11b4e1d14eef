"""Exact learners for T-doped stabilizer states.

Both algorithms touch the unknown state only through a :class:`QueryModel`:

* Algorithm 1 draws Xi-samples (Bell measurements of ``psi ⊗ psi*``), keeps
  those that pass a repeated-measurement stabilizer test, extracts generators
  by elimination, then keeps sampling until every coset of the Pauli support
  has a representative whose expectation has been pinned to the exact grid.
* Algorithm 2 only needs Xi-tilde samples (``psi ⊗ psi``).  Products of
  sample pairs that pass the stabilizer test give the group; the diagonalizer
  then isolates the non-stabilizer register, whose Paulis are measured one by
  one.

Both stop on an exact certificate: the purity identity
``(2^m/d)(1 + sum e_i^2) == 1`` in ``Z[sqrt2]`` arithmetic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .clifford import CliffordCircuit, InvalidGroupError, _conj_bits, build_diagonalizer, conjugate_pauli
from .f2 import IncrementalBasis
from .grid import ONE, AmbiguousEstimateError, GridValue, enumerate_grid, grid_gap, nearest_grid
from .model import DopedDescription, purity
from .oracle import ConsistencyError, QueryModel
from .pauli import PauliString, SignedPauli, mul

__all__ = [
    "LearnerConfig",
    "LearnOutcome",
    "BudgetExhausted",
    "InconsistentDescription",
    "CosetTable",
    "test_membership",
    "learn_group_xi",
    "learn_group_xi_tilde",
    "coset_check",
    "coset_check_elimination",
    "learn_bad_generators",
    "estimate_expectation_exact",
    "learn_algorithm1",
    "learn_algorithm2",
    "default_estimate_shots",
]

SUCCESS = "success"
BUDGET = "budget-exhausted"
AMBIGUOUS = "ambiguous-estimate"
INCONSISTENT = "inconsistent"

MAX_RESIDUAL_QUBITS = 10


class BudgetExhausted(RuntimeError):
    pass


class InconsistentDescription(RuntimeError):
    """Estimates overshoot the purity identity or contradict the learned group."""


def _grid_extremes(t: int) -> tuple[float, float]:
    """Smallest positive and largest sub-unit magnitudes on the ``t`` grid."""
    vals = [abs(float(v)) for v in enumerate_grid(t)]
    inner = [v for v in vals if 1e-12 < v < 1 - 1e-12]
    if not inner:
        return 1.0, 0.0
    return min(inner), max(inner)


def default_estimate_shots(t: int) -> int:
    """Hoeffding count putting each estimate within half the grid gap w.p. >= 1 - 2/(100*4^t)."""
    return math.ceil(8 * math.log(100 * 4**t) / grid_gap(t) ** 2)


@dataclass(frozen=True)
class LearnerConfig:
    shots_membership: int
    shots_estimate: int
    group_sample_budget: int
    bad_gen_sample_budget: int
    pair_budget: int
    seed: Optional[int] = None
    stall_accepts: int = 10

    def __post_init__(self):
        for name in ("shots_membership", "shots_estimate", "group_sample_budget",
                     "bad_gen_sample_budget", "pair_budget", "stall_accepts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def default(cls, n: int, t: int, seed: Optional[int] = None, **overrides) -> LearnerConfig:
        h_min, h_max = _grid_extremes(t)
        # M = 2^(3t+1)(n+t), floored so a non-stabilizer passes with prob <= 1e-6
        floor = math.ceil(math.log(2e6) / -math.log((1 + h_max) / 2))
        values = dict(
            shots_membership=max(2 ** (3 * t + 1) * (n + t), floor),
            shots_estimate=default_estimate_shots(t),
            group_sample_budget=10 * (2 * n + 10) * 2**t + 100,
            bad_gen_sample_budget=math.ceil(20 * 2**t * (t * math.log(4) + 1) / h_min**2) + 100,
            pair_budget=4 * (2 * n + 10) * 2 ** (6 * t) + 100,
            seed=seed,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class LearnOutcome:
    algorithm: int
    status: str
    description: Optional[DopedDescription]
    resources: dict = field(default_factory=dict)
    message: str = ""
    residuals: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == SUCCESS

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "status": self.status,
            "message": self.message,
            "resources": dict(self.resources),
            "description": None if self.description is None else self.description.to_dict(),
            "residuals": [list(r.as_tuple()) for r in self.residuals],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> LearnOutcome:
        desc = data.get("description")
        return cls(
            algorithm=int(data["algorithm"]),
            status=data["status"],
            description=None if desc is None else DopedDescription.from_dict(desc),
            resources=dict(data.get("resources", {})),
            message=data.get("message", ""),
            residuals=[GridValue(*r) for r in data.get("residuals", [])],
        )


# ---------------------------------------------------------------------------
# primitives


def test_membership(q: QueryModel, p: PauliString, shots: int) -> Optional[int]:
    """Measure ``p`` ``shots`` times; the common outcome if all agree, else None."""
    if shots < 1:
        raise ValueError("need at least one shot")
    if p.is_identity:
        return 1
    outcomes = q.measure_shots(p.unsigned(), shots)
    first = int(outcomes[0])
    return first if (outcomes == first).all() else None


test_membership.__test__ = False  # not a pytest test despite the name


def estimate_expectation_exact(q: QueryModel, p: PauliString, t: int, shots: int) -> GridValue:
    """Empirical mean of ``shots`` measurements snapped to the ``t`` grid."""
    if shots < 1:
        raise ValueError("need at least one shot")
    mean = float(q.measure_shots(p.unsigned(), shots).mean())
    return nearest_grid(mean, t)


class _GroupCollector:
    """Accepted stabilizer samples and the basis they span.

    Collection ends at full rank, or once ``2n`` samples are in and the last
    ``stall`` of them added nothing: a missing generator survives that with
    probability at most ``2^-stall``.
    """

    def __init__(self, n: int, stall: int):
        self.n = n
        self.stall = stall
        self.basis = IncrementalBasis(2 * n)
        self.generators: list[SignedPauli] = []
        self.accepted = 0
        self.since_growth = 0

    def offer(self, p: PauliString, sign: int) -> None:
        self.accepted += 1
        self.since_growth += 1
        if self.basis.add(p.index):
            self.generators.append(SignedPauli(p.unsigned(), sign))
            self.since_growth = 0

    @property
    def done(self) -> bool:
        if self.basis.rank == self.n:
            return True
        return self.accepted >= 2 * self.n and self.since_growth >= self.stall


def learn_group_xi(q: QueryModel, n: int, cfg: LearnerConfig, _state: dict | None = None) -> list[SignedPauli]:
    """Stabilizer generators and signs from accepted Xi-samples."""
    col = _GroupCollector(n, cfg.stall_accepts)
    if _state is not None:
        _state["collector"] = col
    for _ in range(cfg.group_sample_budget):
        p = q.sample_xi()
        sign = test_membership(q, p, cfg.shots_membership)
        if sign is not None:
            col.offer(p, sign)
            if col.done:
                return col.generators
    raise BudgetExhausted(f"group stage unfinished after {col.accepted} accepted samples within "
                          f"{cfg.group_sample_budget} Xi-samples")


def learn_group_xi_tilde(q: QueryModel, n: int, cfg: LearnerConfig, _state: dict | None = None) -> list[SignedPauli]:
    """Stabilizer generators from products of Xi-tilde sample pairs."""
    col = _GroupCollector(n, cfg.stall_accepts)
    if _state is not None:
        _state["collector"] = col
    for _ in range(cfg.pair_budget):
        p, p2 = q.sample_xi_tilde(2)
        prod = mul(p, p2).unsigned()
        sign = test_membership(q, prod, cfg.shots_membership)
        if sign is not None:
            col.offer(prod, sign)
            if col.done:
                return col.generators
    raise BudgetExhausted(f"group stage unfinished after {col.accepted} accepted pair products within "
                          f"{cfg.pair_budget} pairs")


# ---------------------------------------------------------------------------
# coset membership


class CosetTable:
    """Membership in ``G ∪ h_1 G ∪ ...`` via the diagonalizer.

    Under ``D`` the group becomes ``<Z_0..Z_{m-1}>``, so two Paulis share a
    coset iff their images agree on all X bits and on the Z bits of qubits
    ``m..n-1``.  That pair of integers is a dictionary key.
    """

    def __init__(self, generators: Sequence[SignedPauli], n: int, diag: CliffordCircuit | None = None):
        self.n = n
        self.m = len(generators)
        self.diag = build_diagonalizer(generators, n) if diag is None else diag
        for i, g in enumerate(generators):
            img = conjugate_pauli(self.diag, g)
            if img.pauli != PauliString.single(n, i, "Z"):
                raise ConsistencyError(f"diagonalizer maps generator {i} to {img}, not Z_{i}")
        self._high = ((1 << n) - 1) ^ ((1 << self.m) - 1)
        self._keys: dict[tuple[int, int], PauliString] = {(0, 0): PauliString.identity(n)}
        self.lookups = 0

    def key(self, p: PauliString) -> tuple[int, int]:
        x, z, _ = _conj_bits(self.diag.gates, p.x, p.z, 0)
        return x, z & self._high

    def __contains__(self, p: PauliString) -> bool:
        self.lookups += 1
        return self.key(p) in self._keys

    def add(self, h: PauliString) -> None:
        self._keys.setdefault(self.key(h), h)

    def __len__(self) -> int:
        return len(self._keys)


def coset_check(p: PauliString, generators: Sequence[SignedPauli], bad: Sequence[PauliString],
                diag: CliffordCircuit | None = None) -> bool:
    table = CosetTable(generators, p.n, diag)
    for h in bad:
        table.add(h)
    return p in table


def coset_check_elimination(p: PauliString, generators: Sequence[SignedPauli], bad: Sequence[PauliString]) -> bool:
    """Same predicate by Gaussian elimination on ``h_i P`` for every ``h_i``."""
    basis = IncrementalBasis(2 * p.n)
    for g in generators:
        basis.add(g.pauli.index)
    return any(basis.contains(mul(h, p).index) for h in [PauliString.identity(p.n), *bad])


# ---------------------------------------------------------------------------
# bad generators


def _dedupe(generators: Sequence[SignedPauli], n: int, bad: list) -> CosetTable:
    """Rebuild the coset table and drop representatives that now share a coset."""
    table = CosetTable(generators, n)
    kept = []
    for h, e in bad:
        if h not in table:
            table.add(h)
            kept.append((h, e))
    bad[:] = kept
    return table


def learn_bad_generators(q: QueryModel, generators: list[SignedPauli], n: int, t: int, cfg: LearnerConfig,
                         diag: CliffordCircuit | None = None, residuals: list | None = None,
                         found: list | None = None) -> list[tuple[PauliString, GridValue]]:
    """Sample Xi until the exact purity identity certifies every coset is covered.

    A sample whose expectation snaps to +-1 is a stabilizer the group stage
    missed; it is appended to ``generators`` in place and the coset table is
    rebuilt.
    """
    table = CosetTable(generators, n, diag)
    found = [] if found is None else found
    residuals = [] if residuals is None else residuals

    def residual() -> GridValue:
        return ONE - purity(DopedDescription(n, t, tuple(generators), tuple(found)))

    r = residual()
    residuals.append(r)
    used = 0
    while r:
        if r.sign() < 0:
            raise InconsistentDescription(f"purity overshoot: residual {r}")
        if used >= cfg.bad_gen_sample_budget:
            raise BudgetExhausted(f"{len(found)} bad generators after {used} Xi-samples, residual {float(r):.3g}")
        used += 1
        p = q.sample_xi()
        if p in table:
            continue
        e = estimate_expectation_exact(q, p, t, cfg.shots_estimate)
        if not e:
            continue  # a Xi-sample always has nonzero expectation: estimate noise
        if abs(e) == ONE:
            generators.append(SignedPauli(p.unsigned(), e.sign()))
            table = _dedupe(generators, n, found)
        else:
            table.add(p)
            found.append((p, e))
        r = residual()
        residuals.append(r)
    return found


# ---------------------------------------------------------------------------
# full algorithms


def _outcome(algorithm: int, q: QueryModel, status: str, desc, steps: int, msg: str = "", residuals=()) -> LearnOutcome:
    res = q.resources()
    res["elimination_steps"] = steps
    return LearnOutcome(algorithm, status, desc, res, msg, list(residuals))


def learn_algorithm1(q: QueryModel, n: int, t: int, cfg: LearnerConfig | None = None) -> LearnOutcome:
    cfg = cfg or LearnerConfig.default(n, t)
    state: dict = {}
    gens: list[SignedPauli] = []
    bad: list = []
    residuals: list = []
    try:
        gens = learn_group_xi(q, n, cfg, state)
        diag = build_diagonalizer(gens, n)
        learn_bad_generators(q, gens, n, t, cfg, diag, residuals, bad)
        status, msg = SUCCESS, ""
    except BudgetExhausted as exc:
        status, msg = BUDGET, str(exc)
    except AmbiguousEstimateError as exc:
        status, msg = AMBIGUOUS, str(exc)
    except (InconsistentDescription, InvalidGroupError, ConsistencyError) as exc:
        status, msg = INCONSISTENT, str(exc)
    steps = state["collector"].basis.steps if "collector" in state else 0
    desc = DopedDescription(n, t, tuple(gens), tuple(bad))
    return _outcome(1, q, status, desc, steps, msg, residuals)


def residual_paulis(n: int, m: int):
    """Every non-identity Pauli supported on qubits ``m..n-1``."""
    r = n - m
    low = (1 << r) - 1
    for idx in range(1, 4**r):
        yield PauliString(n, (idx & low) << m, (idx >> r) << m)


def _residual_tomography(q: QueryModel, gens: list[SignedPauli], n: int, t: int, cfg: LearnerConfig) -> list:
    """Measure ``D^dag (1 ⊗ P) D`` for every Pauli on the unstabilized register.

    Returns the bad generators, or None after promoting a missed stabilizer
    into ``gens`` (the caller then rebuilds the diagonalizer).
    """
    diag = build_diagonalizer(gens, n)
    m = len(gens)
    if n - m > MAX_RESIDUAL_QUBITS:
        raise InconsistentDescription(f"residual register of {n - m} qubits exceeds the cap")
    bad = []
    for pbar in residual_paulis(n, m):
        h = conjugate_pauli(diag, SignedPauli(pbar), "inverse").pauli
        e = estimate_expectation_exact(q, h, t, cfg.shots_estimate)
        if abs(e) == ONE:
            gens.append(SignedPauli(h, e.sign()))
            return None
        if e:
            bad.append((h, e))
    return bad


def learn_algorithm2(q: QueryModel, n: int, t: int, cfg: LearnerConfig | None = None) -> LearnOutcome:
    cfg = cfg or LearnerConfig.default(n, t)
    state: dict = {}
    gens: list[SignedPauli] = []
    bad: list = []
    residuals: list = []
    try:
        gens = learn_group_xi_tilde(q, n, cfg, state)
        while (found := _residual_tomography(q, gens, n, t, cfg)) is None:
            pass
        bad = found
        r = ONE - purity(DopedDescription(n, t, tuple(gens), tuple(bad)))
        residuals.append(r)
        if r:
            raise InconsistentDescription(f"purity residual {r} after residual tomography")
        status, msg = SUCCESS, ""
    except BudgetExhausted as exc:
        status, msg = BUDGET, str(exc)
    except AmbiguousEstimateError as exc:
        status, msg = AMBIGUOUS, str(exc)
    except (InconsistentDescription, InvalidGroupError, ConsistencyError) as exc:
        status, msg = INCONSISTENT, str(exc)
    steps = state["collector"].basis.steps if "collector" in state else 0
    desc = DopedDescription(n, t, tuple(gens), tuple(bad))
    return _outcome(2, q, status, desc, steps, msg, residuals)
