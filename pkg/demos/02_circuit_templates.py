"""Gate-level circuits for both families, checked against the closed forms."""
import numpy as np

from ybgate import circuits, gates
from ybgate.circuits import TEMPLATES

theta = 0.37

# every template reproduces its gate up to a global phase
for name, (build, family) in TEMPLATES.items():
    circ = build(theta)
    dist, phase = circuits.template_residual(circ, gates.yb_gate(family, theta))
    print(f"{name:14s} ops={len(circ.ops):2d}  distance={dist:.1e}  phase={phase:+.3f}")

# the braid gate is one CNOT plus single-qubit dressing
print(circuits.template_residual(circuits.template_braid_cnot(), gates.braid_gate()))

# the other reading of the trailing Z/H order is off by a lot
print(circuits.template_residual(circuits.template_braid_cnot(z_before_h=True), gates.braid_gate()))

# a printed circuit in time order
for op in TEMPLATES["r2_three_cnot"][0](theta).ops:
    print(op)

# identities used to move between CNOT and Rzz forms
for row in circuits.verify_appendix_identities(n_angles=10, seed=0):
    print(f"{row['id']:22s} {row['residual']:.1e}")
