"""Command-line front end: ``python -m tdoped <command> ...``.

Commands
  gen     write a random T-doped circuit
  learn   run Algorithm 1 or 2 against a circuit's state
  verify  compare a description (or outcome) with the circuit's exact state
  sample  draw Xi or Xi-tilde samples
  batch   gen + learn + verify over many seeded trials, one JSON record per line
  stats   per-t summary of batch records

Exit codes: 0 success, 1 learner failure, 2 verification mismatch,
3 budget exhausted, 4 input error.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .clifford import DopedCircuit, format_circuit, parse_circuit, random_doped_circuit
from .grid import ZERO, AmbiguousEstimateError, nearest_grid
from .learner import BUDGET, SUCCESS, LearnerConfig, LearnOutcome, learn_algorithm1, learn_algorithm2
from .model import MAX_DENSE_QUBITS, DopedDescription, expectation_table, reconstruct_density
from .oracle import MAX_QUBITS, QueryModel, ResourceError, StateVector, pauli_expectation_table, run_circuit
from .pauli import PauliString

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4

EXACT = "exact-match"
MISMATCH = "mismatch"
FAILED = "failed"


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# verification


@dataclass
class Verdict:
    verdict: str
    trace_distance: float
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == EXACT


def compare_to_oracle(psi: StateVector, desc: DopedDescription, t: int, limit: int = 10) -> Verdict:
    """Exact comparison of all ``4^n`` expectations plus a trace-distance check."""
    if psi.n != desc.n:
        return Verdict(MISMATCH, float("nan"), [f"qubit count {desc.n} != {psi.n}"])
    if psi.n > MAX_DENSE_QUBITS:
        raise ResourceError(f"verification capped at {MAX_DENSE_QUBITS} qubits")
    table = pauli_expectation_table(psi)
    problems = []
    for i, g in enumerate(desc.generators):
        if abs(table[g.pauli.index] - g.sign) > 1e-9:
            problems.append(f"generator {i} ({g.label()}): oracle expectation {table[g.pauli.index]:+.6f}")
    for i, (h, e) in enumerate(desc.bad_generators):
        if abs(table[h.index] - float(e)) > 1e-9:
            problems.append(f"bad generator {i} ({h.letters()}): stored {e}, oracle {table[h.index]:+.6f}")

    learned = expectation_table(desc)
    wrong = 0
    for idx, value in enumerate(table):
        try:
            truth = nearest_grid(float(value), t)
        except AmbiguousEstimateError:
            problems.append(f"oracle value {value} off the t={t} grid")
            break
        if learned.get(idx, ZERO) != truth:
            wrong += 1
            if wrong <= limit:
                problems.append(f"{PauliString.from_index(psi.n, idx).letters()}: "
                                f"description {learned.get(idx, ZERO)}, oracle {truth}")
    if wrong > limit:
        problems.append(f"... {wrong} mismatching expectations in total")

    diff = reconstruct_density(desc) - np.outer(psi.amplitudes, psi.amplitudes.conj())
    dist = 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())
    ok = not problems and dist < 1e-8
    return Verdict(EXACT if ok else MISMATCH, dist, problems)


# ---------------------------------------------------------------------------
# records


@dataclass
class ExperimentRecord:
    circuit: str
    seed: int | None
    algorithm: int
    n: int
    t: int
    config: dict
    outcome: dict
    verdict: str
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> ExperimentRecord:
        return cls(**json.loads(line))


def run_trial(circuit: DopedCircuit, algorithm: int, cfg: LearnerConfig, circuit_ref: str) -> ExperimentRecord:
    t0 = time.perf_counter()
    q = QueryModel.from_circuit(circuit, seed=cfg.seed)
    t1 = time.perf_counter()
    learn = learn_algorithm1 if algorithm == 1 else learn_algorithm2
    outcome = learn(q, circuit.n, circuit.t, cfg)
    t2 = time.perf_counter()
    verdict = FAILED
    if outcome.ok:
        verdict = compare_to_oracle(q._state, outcome.description, circuit.t).verdict
    t3 = time.perf_counter()
    return ExperimentRecord(
        circuit=circuit_ref, seed=cfg.seed, algorithm=algorithm, n=circuit.n, t=circuit.t,
        config=cfg.to_dict(), outcome=outcome.to_dict(), verdict=verdict,
        timings={"simulate": t1 - t0, "learn": t2 - t1, "verify": t3 - t2},
    )


def summarize(records: list[ExperimentRecord]) -> str:
    if not records:
        raise InputError("no records")
    by_t = defaultdict(list)
    for r in records:
        by_t[r.t].append(r)
    rows = ["   t  runs  exact  median_xi  median_xi_tilde  median_shots"]
    for t in sorted(by_t):
        rs = by_t[t]
        res = [r.outcome["resources"] for r in rs]
        exact = sum(r.verdict == EXACT for r in rs) / len(rs)
        rows.append(
            f"{t:4d}  {len(rs):4d}  {exact:5.1%}  "
            f"{statistics.median(x['xi_samples'] for x in res):9.1f}  "
            f"{statistics.median(x['xi_tilde_samples'] for x in res):15.1f}  "
            f"{statistics.median(x['shots'] for x in res):12.1f}"
        )
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# commands


def _read_circuit(path: str) -> DopedCircuit:
    try:
        return parse_circuit(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read circuit: {exc}") from None
    except ValueError as exc:
        raise InputError(f"bad circuit file {path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args, n: int, t: int) -> LearnerConfig:
    overrides = {}
    if getattr(args, "config", None):
        try:
            overrides.update(json.loads(Path(args.config).read_text()))
        except (OSError, ValueError) as exc:
            raise InputError(f"bad config file: {exc}") from None
    flags = dict(
        shots_membership=args.shots_M, shots_estimate=args.shots_N,
        group_sample_budget=args.budget_group, bad_gen_sample_budget=args.budget_bad,
        pair_budget=args.budget_pairs,
    )
    overrides.update({k: v for k, v in flags.items() if v is not None})
    overrides.pop("seed", None)
    try:
        return LearnerConfig.default(n, t, seed=args.seed, **overrides)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad learner config: {exc}") from None


def cmd_gen(args) -> int:
    if not (1 <= args.n <= MAX_QUBITS and 0 <= args.t <= 12):
        raise InputError(f"need 1 <= n <= {MAX_QUBITS} and 0 <= t <= 12")
    c = random_doped_circuit(args.n, args.t, np.random.default_rng(args.seed))
    _emit(format_circuit(c), args.out)
    return EXIT_OK


def cmd_learn(args) -> int:
    c = _read_circuit(args.circuit)
    cfg = _config(args, c.n, c.t)
    q = QueryModel.from_circuit(c, seed=cfg.seed)
    learn = learn_algorithm1 if args.algorithm == 1 else learn_algorithm2
    outcome = learn(q, c.n, c.t, cfg)
    _emit(outcome.to_json(), args.out)
    if outcome.status != SUCCESS:
        print(f"{outcome.status}: {outcome.message}", file=sys.stderr)
    if outcome.status == SUCCESS:
        return EXIT_OK
    return EXIT_BUDGET if outcome.status == BUDGET else EXIT_FAILED


def _read_description(path: str) -> DopedDescription:
    try:
        data = json.loads(Path(path).read_text())
        if "status" in data:
            outcome = LearnOutcome.from_dict(data)
            if outcome.description is None:
                raise InputError("outcome file has no description")
            return outcome.description
        return DopedDescription.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad description file {path}: {exc}") from None


def cmd_verify(args) -> int:
    c = _read_circuit(args.circuit)
    desc = _read_description(args.description)
    if c.n > MAX_DENSE_QUBITS:
        raise InputError(f"verification capped at {MAX_DENSE_QUBITS} qubits")
    v = compare_to_oracle(run_circuit(c), desc, c.t)
    lines = [f"verdict: {v.verdict}", f"trace distance: {v.trace_distance:.3e}", *v.mismatches]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if v.ok else EXIT_MISMATCH


def cmd_sample(args) -> int:
    c = _read_circuit(args.circuit)
    q = QueryModel.from_circuit(c, seed=args.seed)
    draw = q.sample_xi if args.which == "xi" else q.sample_xi_tilde
    ps = draw(args.count) if args.count else []
    _emit("".join(p.letters() + "\n" for p in ps), args.out)
    return EXIT_OK


def _batch_trials(args):
    root = np.random.SeedSequence(args.seed)
    children = root.spawn(args.count)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        n = int(rng.choice(args.n))
        t = int(rng.choice(args.t))
        circuit = random_doped_circuit(n, t, rng)
        yield i, circuit, int(rng.integers(2**63))


def cmd_batch(args) -> int:
    out = Path(args.out) if args.out else None
    cdir = None
    if out is not None:
        cdir = out.with_suffix("").parent / (out.stem + "_circuits")
        cdir.mkdir(parents=True, exist_ok=True)

    def job(item):
        i, circuit, seed = item
        ref = f"trial-{i:04d}.circ"
        if cdir is not None:
            (cdir / ref).write_text(format_circuit(circuit))
            ref = str(cdir / ref)
        cfg = _config(args, circuit.n, circuit.t)
        cfg = LearnerConfig(**{**cfg.to_dict(), "seed": seed})
        return run_trial(circuit, args.algorithm, cfg, ref)

    trials = list(_batch_trials(args))
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        records = list(pool.map(job, trials))
    if out is not None:
        with out.open("a") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
    rate = sum(r.verdict == EXACT for r in records) / len(records)
    print(f"exact-match rate: {rate:.1%} over {len(records)} trials")
    print(summarize(records), end="")
    return EXIT_OK


def cmd_stats(args) -> int:
    records = []
    for path in args.records:
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        try:
            records += [ExperimentRecord.from_json(ln) for ln in lines if ln.strip()]
        except (ValueError, TypeError) as exc:
            raise InputError(f"bad record in {path}: {exc}") from None
    _emit(summarize(records), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _learner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", help="JSON file with LearnerConfig fields")
    p.add_argument("--shots-M", dest="shots_M", type=int, help="membership-test shots")
    p.add_argument("--shots-N", dest="shots_N", type=int, help="expectation-estimate shots")
    p.add_argument("--budget-group", type=int, help="Xi-samples for the group stage")
    p.add_argument("--budget-bad", type=int, help="Xi-samples for the coset stage")
    p.add_argument("--budget-pairs", type=int, help="Xi-tilde pairs (Algorithm 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdoped", description="Learn T-doped stabilizer states exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random doped circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("learn", help="learn the state of a circuit")
    p.add_argument("circuit")
    _learner_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("verify", help="check a description against the exact state")
    p.add_argument("circuit")
    p.add_argument("description", help="description JSON or learn outcome JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="draw Xi or Xi-tilde samples")
    p.add_argument("circuit")
    p.add_argument("--which", choices=("xi", "xi-tilde"), default="xi")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("batch", help="seeded gen/learn/verify sweep")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--t", type=int, nargs="+", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="JSONL file to append records to")
    _learner_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("stats", help="summarize batch records")
    p.add_argument("records", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
