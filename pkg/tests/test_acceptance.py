"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are written
straight to the terminal so they show up even when output is captured.
"""
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from tdoped.cli import main
from tdoped.clifford import conjugate_circuit, random_doped_circuit
from tdoped.grid import delta_lower_bound
from tdoped.learner import learn_algorithm1, learn_algorithm2, test_membership as membership
from tdoped.model import DopedDescription, chi_distribution, expectation_table, structural_sample_xi, validate
from tdoped.oracle import (
    QueryModel,
    StateVector,
    conjugate_overlap_table,
    describe_state,
    exact_xi,
    exact_xi_tilde,
    pauli_expectation_table,
    run_circuit,
)
from tdoped.pauli import PauliString


@pytest.fixture
def report(capsys):
    def emit(number: int, passed: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if passed else 'FAIL'}: {detail}")

    return emit


@lru_cache(maxsize=None)
def structure_instances():
    """500 seeded doped states with n <= 6, t <= 4 and their oracle data."""
    out = []
    for i in range(500):
        rng = np.random.default_rng(4000 + i)
        n, t = 1 + i % 6, (i // 6) % 5
        c = random_doped_circuit(n, t, rng)
        psi = run_circuit(c)
        table = pauli_expectation_table(psi)
        out.append((c, psi, table, describe_state(psi, t, table=table)))
    return out


def learn_and_verify(tmp_path, n, t, seed, algorithm):
    circ, out = tmp_path / f"c{seed}.circ", tmp_path / f"o{seed}.json"
    main(["gen", "--n", str(n), "--t", str(t), "--seed", str(seed), "--out", str(circ)])
    code = main(["learn", str(circ), "--algorithm", str(algorithm), "--seed", str(seed), "--out", str(out)])
    if code != 0:
        return False
    return main(["verify", str(circ), str(out), "--out", str(tmp_path / "v.txt")]) == 0


def test_criterion_01_algorithm1_exact_recovery(tmp_path, report):
    start = time.perf_counter()
    runs = 200
    hits = sum(learn_and_verify(tmp_path, 2 + i % 5, (i // 5) % 4, 1000 + i, 1) for i in range(runs))
    elapsed = time.perf_counter() - start
    ok = hits >= 0.99 * runs and elapsed < 600
    report(1, ok, f"Algorithm 1 exact-match {hits}/{runs} (need >= 99%), n 2..6, t 0..3, {elapsed:.1f}s (< 600s)")
    assert ok


def test_criterion_02_algorithm2_exact_recovery(tmp_path, report):
    start = time.perf_counter()
    runs = 100
    hits = sum(learn_and_verify(tmp_path, 2 + i % 4, (i // 4) % 3, 2000 + i, 2) for i in range(runs))
    elapsed = time.perf_counter() - start
    ok = hits >= 0.95 * runs and elapsed < 1200
    report(2, ok, f"Algorithm 2 exact-match {hits}/{runs} (need >= 95%), n 2..5, t 0..2, {elapsed:.1f}s (< 1200s)")
    assert ok


def test_criterion_03_stabilizer_reduction(report):
    good = {1: 0, 2: 0}
    runs = 100
    for i in range(runs):
        rng = np.random.default_rng(3000 + i)
        n = 1 + i % 6
        c = random_doped_circuit(n, 0, rng)
        psi = run_circuit(c)
        truth = expectation_table(describe_state(psi, 0))
        for alg, learn in ((1, learn_algorithm1), (2, learn_algorithm2)):
            out = learn(QueryModel(psi, seed=i), n, 0)
            d = out.description
            good[alg] += out.ok and d.k == 0 and d.m == n and expectation_table(d) == truth
    ok = good[1] == runs and good[2] == runs
    report(3, ok, f"t=0: Algorithm 1 {good[1]}/{runs}, Algorithm 2 {good[2]}/{runs} with k=0 and rank n")
    assert ok


def test_criterion_04_structure_bounds(report):
    violations = []
    for i, (c, psi, table, desc) in enumerate(structure_instances()):
        n, t = c.n, c.t
        d = 1 << n
        group = 1 << desc.m
        support = int(np.count_nonzero(np.abs(table) > 1e-9))
        rep = validate(desc)
        checks = {
            "group_size": d >> t <= group <= d,
            "support_size": support <= (d << t),
            "coset_count": group * (desc.k + 1) == support,
            "disjoint": rep.checks["cosets_disjoint"],
        }
        violations += [(i, name) for name, passed in checks.items() if not passed]
    ok = not violations
    report(4, ok, f"500 oracle descriptions (n<=6, t<=4): {len(violations)} structure violations {violations[:5]}")
    assert ok


def _distinct(values, tol=1e-9):
    v = np.sort(values)
    keep = np.concatenate(([True], np.diff(v) > tol))
    return v[keep]


def test_criterion_05_finite_resolution(report):
    violations = 0
    worst = {}
    for c, _, table, _ in structure_instances():
        vals = _distinct(table)
        gap = float(np.diff(vals).min()) if vals.size > 1 else math.inf
        worst[c.t] = min(worst.get(c.t, math.inf), gap)
        violations += gap < delta_lower_bound(c.t)
    observed = worst.get(1, math.inf)
    ok = violations == 0 and observed >= delta_lower_bound(1)
    detail = ", ".join(f"t={t}: min gap {g:.4f} vs bound {delta_lower_bound(t):.5f}" for t, g in sorted(worst.items()))
    report(5, ok, f"{violations} violations over 500 instances; {detail}")
    assert ok


def test_criterion_06_sampling(report):
    draws = 100_000
    lines = []
    ok = True
    for i in range(3):
        rng = np.random.default_rng(6000 + i)
        psi = run_circuit(random_doped_circuit(4, 2, rng))
        desc = describe_state(psi, 2)
        xi, xt = exact_xi(psi), exact_xi_tilde(psi)
        q = QueryModel(psi, seed=6000 + i)
        tv_xi = xi.tv_distance(np.array([p.index for p in q.sample_xi(draws)]))
        tv_xt = xt.tv_distance(np.array([p.index for p in q.sample_xi_tilde(draws)]))
        tv_st = xi.tv_distance(np.array([p.index for p in structural_sample_xi(desc, rng, draws)]))

        # structural probabilities, element by element
        exact = xi.as_dict()
        group = list(expectation_table(DopedDescription(4, 0, desc.generators)))
        worst = 0.0
        seen = set()
        for h, chi in chi_distribution(desc):
            for g in group:
                idx = (PauliString.from_index(4, g) * h).index
                seen.add(idx)
                worst = max(worst, abs(float(chi) / len(group) - exact.get(idx, 0.0)))
        same_support = seen == set(exact)
        ok &= max(tv_xi, tv_xt, tv_st) <= 0.01 and worst <= 1e-10 and same_support
        lines.append(f"instance {i}: TV xi {tv_xi:.4f}, xi~ {tv_xt:.4f}, structural {tv_st:.4f}, "
                     f"max |p_struct - p_exact| {worst:.1e}")
    report(6, ok, "n=4 t=2, 1e5 draws (TV <= 0.01, probs to 1e-10): " + "; ".join(lines))
    assert ok


def test_criterion_07_probability_floors(report):
    violations = []
    worst_xi, worst_pair = {}, {}
    for i in range(240):
        rng = np.random.default_rng(7000 + i)
        n, t = 1 + i % 4, (i // 4) % 3
        psi = run_circuit(random_doped_circuit(n, t, rng))
        table = pauli_expectation_table(psi)
        in_group = np.abs(np.abs(table) - 1) < 1e-9
        xi = table**2 / (1 << n)
        mass = float(xi[in_group].sum())
        tilde = conjugate_overlap_table(psi) ** 2 / (1 << n)
        # Pr(PP' in G) = sum_{g in G} sum_P tilde(P) tilde(P g); XOR of indices is the product
        idx = np.arange(4**n)
        pair = float(sum(tilde @ tilde[idx ^ g] for g in np.flatnonzero(in_group)))
        worst_xi[t] = min(worst_xi.get(t, math.inf), mass * 2**t)
        worst_pair[t] = min(worst_pair.get(t, math.inf), pair * 2 ** (6 * t))
        if mass < 2.0**-t - 1e-12 or pair < 2.0 ** (-6 * t) - 1e-12:
            violations.append((n, t, mass, pair))
    ok = not violations
    detail = ", ".join(f"t={t}: min Pr(G)*2^t {worst_xi[t]:.3f}, min Pr(PP' in G)*2^(6t) {worst_pair[t]:.1f}"
                       for t in sorted(worst_xi))
    report(7, ok, f"240 states n<=4 t<=2: {len(violations)} violations; {detail}")
    assert ok


def test_criterion_08_membership_bound(report):
    """False-accept rate on known bad generators vs (h_max/2 + 1/2)^M.

    The bound counts the all-(+1) event only; all-(-1) adds ((1-h)/2)^M,
    so the comparison allows three binomial standard errors of slack.
    """
    trials = 10_000
    lines = []
    ok = True
    for i, t in enumerate((1, 2, 3)):
        rng = np.random.default_rng(8000 + i)
        psi = run_circuit(random_doped_circuit(4, t, rng))
        desc = describe_state(psi, t)
        h_max = max(abs(float(e)) for _, e in desc.bad_generators)
        table = pauli_expectation_table(psi)
        bad = np.flatnonzero((np.abs(table) > 1e-9) & (np.abs(np.abs(table) - 1) > 1e-9))
        q = QueryModel(psi, seed=8000 + i)
        for m_shots in (5, 10, 20):
            picks = rng.choice(bad, size=trials)
            accepts = sum(membership(q, PauliString.from_index(4, int(j)), m_shots) is not None for j in picks)
            rate = accepts / trials
            bound = (h_max / 2 + 0.5) ** m_shots
            slack = 3 * math.sqrt(bound * (1 - bound) / trials)
            passed = rate <= bound + slack
            ok &= passed
            lines.append(f"t={t} M={m_shots}: {rate:.4f} vs {bound:.4f}{'' if rate <= bound else ' (within 3 sigma)'}")
    report(8, ok, f"{trials} trials each: " + "; ".join(lines))
    assert ok


def test_criterion_09_conjugate_overlap_floor(report):
    violations = 0
    minima = {}
    for q in (1, 2, 3):
        rng = np.random.default_rng(9000 + q)
        for _ in range(100):
            omega = StateVector.haar_random(q, rng)
            best = float(conjugate_overlap_table(omega).max())
            minima[q] = min(minima.get(q, math.inf), best * 2**q)
            violations += best < 2.0**-q
    ok = violations == 0
    detail = ", ".join(f"q={q}: min max|<w|P|w*>| * 2^q = {m:.3f}" for q, m in minima.items())
    report(9, ok, f"{violations} violations over 300 Haar states; {detail}")
    assert ok


def test_criterion_10_oracle_consistency(report):
    worst_purity, worst_conj = 0.0, 0.0
    for c, psi, table, _ in structure_instances():
        worst_purity = max(worst_purity, abs((table**2).sum() / (1 << c.n) - 1))
        worst_conj = max(worst_conj, float(np.abs(run_circuit(conjugate_circuit(c)).amplitudes
                                                  - psi.amplitudes.conj()).max()))
    ok = worst_purity <= 1e-9 and worst_conj <= 1e-10
    report(10, ok, f"500 states: max |purity - 1| = {worst_purity:.1e} (<= 1e-9), "
                   f"max |conj circuit - conj(psi)| = {worst_conj:.1e} (<= 1e-10)")
    assert ok
