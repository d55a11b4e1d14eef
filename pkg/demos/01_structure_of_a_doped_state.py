"""
Structure of a T-doped stabilizer state
=======================================

Build T|+> and a larger random doped state, read off the stabilizer
group, the cosets of the Pauli support and their exact expectation values.
"""

import numpy as np

from tdoped import DopedCircuit, Gate, enumerate_grid, grid_gap, random_doped_circuit, run_circuit
from tdoped.model import chi_distribution, nullity, stabilizer_entropy, validate
from tdoped.oracle import describe_state

# T|+>: no stabilizers besides the identity, two nontrivial cosets {X}, {Y}
t_plus = run_circuit(DopedCircuit(1, (Gate("H", (0,)), Gate("T", (0,)))))
desc = describe_state(t_plus, t=1)
print(desc.to_json())

# coset weights are exact numbers of the form (a + b*sqrt2)/sqrt2^t
for h, weight in chi_distribution(desc):
    print(f"chi({h.letters()}) = {weight} = {float(weight):.4f}")
print("nullity:", nullity(desc), " M_0 =", round(stabilizer_entropy(desc, 0), 6), "= log2(3/2)")

# a random 5-qubit state with 3 T gates
rng = np.random.default_rng(3)
psi = run_circuit(random_doped_circuit(5, 3, rng))
desc = describe_state(psi, t=3)
print(f"\nn=5 t=3: m={desc.m} generators, k={desc.k} bad generators")
print(validate(desc))

# every expectation lives on a finite grid with a computable spacing
for t in range(5):
    print(f"t={t}: {len(enumerate_grid(t)):3d} grid values, minimum spacing {grid_gap(t):.4f}")
