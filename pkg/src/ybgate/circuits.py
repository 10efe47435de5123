"""Gate-level circuits, the decomposition templates, and identity checks.

Circuits are read left to right in time: the first op acts first, so the
unitary is ``U_last @ ... @ U_first``. Qubit 0 is the top wire and the most
significant tensor factor.
"""
from dataclasses import dataclass, field
import json
import math

import numpy as np

from . import gates
from .gates import GateLabel
from .matrixcore import global_phase_distance, phase_alignment

PI = math.pi


@dataclass(frozen=True)
class Op:
    label: GateLabel
    qubits: tuple

    @property
    def name(self):
        return self.label.name


@dataclass
class Circuit:
    n_qubits: int
    ops: list = field(default_factory=list)

    def __post_init__(self):
        ops, self.ops = list(self.ops), []
        for op in ops:
            self._check(op)
            self.ops.append(op)

    def _check(self, op):
        q = tuple(op.qubits)
        if len(q) != op.label.n_qubits:
            raise ValueError(f"{op.name} needs {op.label.n_qubits} qubit(s), got {q}")
        if len(set(q)) != len(q):
            raise ValueError(f"repeated qubit in {op.name} on {q}")
        if any(not 0 <= i < self.n_qubits for i in q):
            raise ValueError(f"qubit index out of range in {op.name} on {q}")

    def add(self, name, *qubits, param=None):
        label = GateLabel(name, () if param is None else (param,))
        op = Op(label, tuple(qubits))
        self._check(op)
        self.ops.append(op)
        return self

    def extend(self, other):
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different width")
        self.ops.extend(other.ops)
        return self

    def count(self, name):
        return sum(op.name == name for op in self.ops)

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "ops": [{"name": op.name, "params": list(op.label.params), "qubits": list(op.qubits)}
                    for op in self.ops],
        }

    @classmethod
    def from_dict(cls, data):
        ops = [Op(GateLabel(o["name"], tuple(o.get("params", ()))), tuple(o["qubits"]))
               for o in data["ops"]]
        return cls(int(data["n_qubits"]), ops)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def embed(matrix, qubits, n_qubits):
    """Lift a k-qubit matrix acting on ``qubits`` (in that order) to ``n_qubits``."""
    qubits = list(qubits)
    k = len(qubits)
    rest = [q for q in range(n_qubits) if q not in qubits]
    full = np.kron(matrix, np.eye(2 ** len(rest), dtype=complex))
    # axes of `full` are ordered (qubits..., rest...); move them back to 0..n-1
    order = qubits + rest
    perm = np.argsort(order)
    t = full.reshape([2] * (2 * n_qubits))
    t = t.transpose(list(perm) + [n_qubits + p for p in perm])
    assert k <= n_qubits
    return t.reshape(2 ** n_qubits, 2 ** n_qubits)


def unitary_of(circuit):
    dim = 2 ** circuit.n_qubits
    u = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        u = embed(gates.standard_gate(op.label), op.qubits, circuit.n_qubits) @ u
    return u


def expand_rzz(circuit):
    """Replace every Rzz(t) on (a, b) by CNOT(a, b) Rz(t)_b CNOT(a, b)."""
    out = Circuit(circuit.n_qubits)
    for op in circuit.ops:
        if op.name == "Rzz":
            a, b = op.qubits
            out.add("CNOT", a, b).add("Rz", b, param=op.label.angle).add("CNOT", a, b)
        else:
            out.ops.append(op)
    return out


# --- decomposition templates -------------------------------------------------

def template_r1_two_cnot(theta, literal=False):
    """r1(theta) from two CNOTs.

    The printed diagram reproduces r1(theta) only with its wires read bottom
    to top; by default the S/H wire is therefore qubit 1 and the CNOT target
    qubit 0. ``literal=True`` gives the diagram with the top wire as qubit 0.
    """
    c, t = (0, 1) if literal else (1, 0)
    circ = Circuit(2)
    circ.add("S", c).add("H", c).add("H", t)
    circ.add("CNOT", c, t).add("Rz", t, param=2 * theta).add("CNOT", c, t)
    circ.add("H", c).add("Sdag", c).add("H", t)
    return circ


def template_r1_rzz(theta, literal=False):
    """r1(theta) from a single Rzz(2 theta); wire convention as in the two-CNOT template."""
    c, t = (0, 1) if literal else (1, 0)
    circ = Circuit(2)
    circ.add("S", c).add("H", c).add("H", t)
    circ.add("Rzz", c, t, param=2 * theta)
    circ.add("H", c).add("Sdag", c).add("H", t)
    return circ


def template_braid_cnot(z_before_h=False):
    """The braid gate r1(pi/4) from one CNOT.

    The trailing Z on qubit 1 comes after its H; ``z_before_h=True`` builds
    the other reading of the diagram, kept for the verification report.
    """
    circ = Circuit(2)
    circ.add("H", 0).add("Sdag", 0).add("Sdag", 1)
    circ.add("CNOT", 0, 1)
    circ.add("H", 0).add("S", 1)
    if z_before_h:
        circ.add("Z", 1).add("H", 1)
    else:
        circ.add("H", 1).add("Z", 1)
    return circ


def template_r2_three_rzz(phi, literal=False):
    """r2(phi) from three Rzz gates (XX, YY and ZZ rotations).

    With Rzz(t) = exp(-i t ZZ/2) the printed angles give r2(-phi), so the
    default uses Rzz(-phi); ``literal=True`` keeps the printed Rzz(phi).
    """
    t = phi if literal else -phi
    circ = Circuit(2)
    circ.add("H", 0).add("H", 1).add("Rzz", 0, 1, param=t).add("H", 0).add("H", 1)
    circ.add("SqrtX", 0).add("SqrtX", 1).add("Rzz", 0, 1, param=t)
    circ.add("SqrtXdag", 0).add("SqrtXdag", 1).add("Rzz", 0, 1, param=t)
    return circ


def template_r2_three_cnot(phi, literal=False):
    """r2(phi) from three CNOTs; the same sign remark as for the three-Rzz form applies."""
    t = phi if literal else -phi
    circ = Circuit(2)
    circ.add("CNOT", 0, 1)
    circ.add("Rz", 1, param=t).add("H", 0).add("Rz", 0, param=t + PI / 2)
    circ.add("CNOT", 0, 1)
    circ.add("Rz", 1, param=-t).add("H", 0)
    circ.add("CNOT", 0, 1)
    circ.add("SqrtXdag", 0).add("SqrtX", 1)
    return circ


TEMPLATES = {
    "r1_two_cnot": (template_r1_two_cnot, "I"),
    "r1_rzz": (template_r1_rzz, "I"),
    "r2_three_rzz": (template_r2_three_rzz, "II"),
    "r2_three_cnot": (template_r2_three_cnot, "II"),
}


def template_residual(circuit, target):
    """(global-phase distance, realised phase angle) of a circuit against a matrix."""
    u = unitary_of(circuit)
    return global_phase_distance(u, target), float(np.angle(phase_alignment(u, target)))


# --- Appendix-style identities and the three-CNOT derivation chain ----------

def _c(*ops):
    circ = Circuit(2)
    for name, qubits, *param in ops:
        circ.add(name, *qubits, param=param[0] if param else None)
    return circ


def identity_pairs(theta):
    """The five small circuit identities as (id, lhs, rhs) triples."""
    return [
        ("H.SqrtX.H=S",
         _c(("H", (0,)), ("SqrtX", (0,)), ("H", (0,))), _c(("S", (0,)))),
        ("HH.CNOT01.HH=CNOT10",
         _c(("H", (0,)), ("H", (1,)), ("CNOT", (0, 1)), ("H", (0,)), ("H", (1,))),
         _c(("CNOT", (1, 0)))),
        ("Rx_target_commutes",
         _c(("Rx", (1,), theta), ("CNOT", (0, 1))), _c(("CNOT", (0, 1)), ("Rx", (1,), theta))),
        ("Rz_control_commutes",
         _c(("Rz", (0,), theta), ("CNOT", (0, 1))), _c(("CNOT", (0, 1)), ("Rz", (0,), theta))),
        ("CNOT.S.CNOT",
         _c(("CNOT", (0, 1)), ("S", (1,)), ("CNOT", (0, 1))),
         _c(("H", (1,)), ("CNOT", (0, 1)), ("S", (0,)), ("H", (1,)), ("S", (1,)))),
    ]


def derivation_chain(t):
    """The five circuits of the three-Rzz to three-CNOT rewrite, at rotation angle ``t``.

    Each line is unitarily equal (up to phase) to the next; the first equals
    r2(-t), i.e. r2(phi) is reached with t = -phi.
    """
    line1 = _c(("CNOT", (0, 1)), ("Rz", (1,), t), ("CNOT", (0, 1)), ("H", (0,)), ("H", (1,)),
               ("CNOT", (0, 1)), ("Rz", (1,), t), ("CNOT", (0, 1)), ("H", (0,)), ("H", (1,)),
               ("SqrtX", (0,)), ("SqrtX", (1,)),
               ("CNOT", (0, 1)), ("Rz", (1,), t), ("CNOT", (0, 1)),
               ("SqrtXdag", (0,)), ("SqrtXdag", (1,)))
    line2 = _c(("CNOT", (0, 1)), ("Rz", (1,), t), ("H", (0,)), ("H", (1,)), ("CNOT", (1, 0)),
               ("CNOT", (0, 1)), ("S", (0,)), ("Rz", (1,), t), ("CNOT", (0, 1)), ("CNOT", (1, 0)),
               ("H", (0,)), ("H", (1,)), ("SqrtX", (1,)), ("Rz", (1,), t), ("CNOT", (0, 1)),
               ("SqrtXdag", (0,)), ("SqrtXdag", (1,)))
    line3 = _c(("CNOT", (0, 1)), ("Rz", (1,), t), ("H", (0,)), ("H", (1,)), ("CNOT", (0, 1)),
               ("Rz", (0,), t), ("S", (1,)), ("CNOT", (0, 1)), ("H", (0,)), ("H", (1,)),
               ("SqrtX", (1,)), ("Rz", (1,), t), ("CNOT", (0, 1)),
               ("SqrtXdag", (0,)), ("SqrtXdag", (1,)))
    line4 = _c(("CNOT", (0, 1)), ("H", (0,)), ("Rz", (1,), t), ("Rz", (0,), t), ("H", (1,)),
               ("H", (1,)), ("CNOT", (0, 1)), ("S", (0,)), ("H", (1,)), ("H", (0,)), ("S", (1,)),
               ("H", (1,)), ("SqrtX", (1,)), ("Rz", (1,), t), ("CNOT", (0, 1)),
               ("SqrtXdag", (0,)), ("SqrtXdag", (1,)))
    line5 = template_r2_three_cnot(t, literal=True)
    return [line1, line2, line3, line4, line5]


def verify_appendix_identities(n_angles=10, seed=0):
    """Residuals of the five identities and the five chain equalities.

    Angle-dependent checks are evaluated at ``n_angles`` seeded random angles in
    [-pi, pi]; the reported residual is the worst one.
    """
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-PI, PI, n_angles)
    worst = {}
    for th in angles:
        for ident, lhs, rhs in identity_pairs(th):
            r = global_phase_distance(unitary_of(lhs), unitary_of(rhs))
            worst[ident] = max(worst.get(ident, 0.0), r)
    for phi in angles:
        lines = [unitary_of(c) for c in derivation_chain(-phi)]
        pairs = [("chain:R_II=line1", gates.r2(phi), lines[0])]
        pairs += [(f"chain:line{i + 1}=line{i + 2}", lines[i], lines[i + 1]) for i in range(4)]
        for ident, a, b in pairs:
            worst[ident] = max(worst.get(ident, 0.0), global_phase_distance(a, b))
    return [{"id": k, "residual": v} for k, v in worst.items()]
