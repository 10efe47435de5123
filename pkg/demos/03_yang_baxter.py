"""The Yang-Baxter equation on three qubits."""
import numpy as np

from ybgate import gates, ybe

# family I: spectral parameters combine as tan(pi/4 - theta) multiplies
t1, t2 = 0.3, 0.5
t3 = ybe.middle_param("I", t1, t2)
print(t3, ybe.multiplicative_consistency(t1, t2))
print(ybe.check_ybe("I", t1, t2))

# family II: middle parameter from the additive rule in tan(phi)
print(ybe.check_ybe("II", 0.3, 0.5))

# the SWAP end point is a valid boundary input
print(ybe.check_ybe("II", np.pi / 2, 0.4)["exact_residual"])

# wrong middle parameter: the equation visibly breaks
print(ybe.check_ybe("I", t1, t2, t3 + 0.2)["phase_free_residual"])

# the braid gate satisfies the braid relation; CNOT does not
for name, g in (("braid", gates.braid_gate()), ("SWAP", gates.SWAP), ("CNOT", gates.CNOT)):
    print(name, ybe.check_braid_relation(g))
