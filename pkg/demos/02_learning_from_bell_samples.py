"""
Learning a doped state from Bell samples (Algorithm 1)
======================================================

The learner sees the state only through a QueryModel: Bell samples of
psi ⊗ psi* (Xi-samples) and single-copy Pauli measurements.
"""

import numpy as np

from tdoped import LearnerConfig, QueryModel, learn_algorithm1, random_doped_circuit
from tdoped.cli import compare_to_oracle

rng = np.random.default_rng(11)
circuit = random_doped_circuit(5, 2, rng)
q = QueryModel.from_circuit(circuit, seed=11)

cfg = LearnerConfig.default(n=5, t=2, seed=11)
print("membership shots M =", cfg.shots_membership, " estimate shots N =", cfg.shots_estimate)

out = learn_algorithm1(q, 5, 2, cfg)
print("status:", out.status)
print("generators:", [g.label() for g in out.description.generators])
for h, e in out.description.bad_generators:
    print(f"  bad generator {h.letters()}  tr(h psi) = {e}")

# the stopping rule is exact: the purity residual reaches zero in Z[sqrt2]
print("purity residuals:", [str(r) for r in out.residuals])
print("resources:", out.resources)

verdict = compare_to_oracle(q._state, out.description, circuit.t)
print("verdict:", verdict.verdict, f"(trace distance {verdict.trace_distance:.1e})")
