"""
Learning with two copies of psi (Algorithm 2)
=============================================

Bell samples of psi ⊗ psi follow Xi-tilde.  Products of sample pairs that
pass the stabilizer test span the stabilizer group; the diagonalizer then
isolates the few unstabilized qubits, whose Paulis are measured directly.
"""

import numpy as np

from tdoped import QueryModel, build_diagonalizer, conjugate_pauli, learn_algorithm2, random_doped_circuit
from tdoped.cli import compare_to_oracle

rng = np.random.default_rng(5)
circuit = random_doped_circuit(4, 2, rng)
q = QueryModel.from_circuit(circuit, seed=5)

out = learn_algorithm2(q, 4, 2)
desc = out.description
print("status:", out.status, " m =", desc.m, " residual qubits =", desc.n - desc.m)

# the diagonalizer maps each generator to +Z on its own qubit
diag = build_diagonalizer(desc.generators, desc.n)
for g in desc.generators:
    print(f"  D {g.label()} D^dag = {conjugate_pauli(diag, g).label()}")

print("Xi-tilde samples:", out.resources["xi_tilde_samples"], " shots:", out.resources["shots"])
print("verdict:", compare_to_oracle(q._state, desc, circuit.t).verdict)
