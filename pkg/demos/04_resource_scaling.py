"""
Resource use against the number of T gates
==========================================

Median Xi-samples and measurement shots for Algorithm 1 at n = 5.
"""

import statistics

import numpy as np

from tdoped import QueryModel, learn_algorithm1, random_doped_circuit

n, trials = 5, 20
print(" t   exact   median Xi-samples   median shots")
for t in range(4):
    xi, shots, ok = [], [], 0
    for s in range(trials):
        rng = np.random.default_rng(100 * t + s)
        q = QueryModel.from_circuit(random_doped_circuit(n, t, rng), seed=s)
        out = learn_algorithm1(q, n, t)
        ok += out.ok
        xi.append(out.resources["xi_samples"])
        shots.append(out.resources["shots"])
    print(f"{t:2d}   {ok:2d}/{trials}   {statistics.median(xi):17.1f}   {statistics.median(shots):12.1f}")
