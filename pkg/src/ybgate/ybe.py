"""Both sides of the Yang-Baxter equation on three qubits, and braid relations."""
from dataclasses import dataclass
import math

import numpy as np

from .gates import mu_from_phi, normalize_family, nu_from_theta, yb_gate
from .matrixcore import I2, as_matrix, global_phase_distance

PI = math.pi


@dataclass(frozen=True)
class ThreeQubitOp:
    matrix: np.ndarray
    provenance: tuple  # ((pair, family, angle), ...) in product order, leftmost first


def embed_12(u):
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise ValueError("embed_12 needs a 4x4 matrix")
    return np.kron(u, I2)


def embed_23(u):
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise ValueError("embed_23 needs a 4x4 matrix")
    return np.kron(I2, u)


def theta3(theta1, theta2):
    """Dependent middle angle for the first family: tan t3 = sin(t1+t2)/cos(t1-t2)."""
    return math.atan2(math.sin(theta1 + theta2), math.cos(theta1 - theta2))


def phi3(phi1, phi2):
    """Dependent middle angle for the second family: tan p3 = tan p1 + tan p2."""
    mu1, mu2 = mu_from_phi(phi1), mu_from_phi(phi2)
    if math.isinf(mu1) or math.isinf(mu2):
        return PI / 2
    return math.atan(mu1 + mu2)


def middle_param(family, p1, p2):
    return theta3(p1, p2) if normalize_family(family) == "I" else phi3(p1, p2)


def _product(family, factors):
    mats = []
    for pair, angle in factors:
        g = yb_gate(family, angle)
        mats.append(embed_12(g) if pair == "12" else embed_23(g))
    m = mats[0] @ mats[1] @ mats[2]
    prov = tuple((pair, family, angle) for pair, angle in factors)
    return ThreeQubitOp(m, prov)


def build_Yl(family, p1, p2, p3=None):
    """R12(p1) R23(p3) R12(p2) as a literal matrix product."""
    family = normalize_family(family)
    p3 = middle_param(family, p1, p2) if p3 is None else p3
    return _product(family, [("12", p1), ("23", p3), ("12", p2)])


def build_Yr(family, p1, p2, p3=None):
    """R23(p2) R12(p3) R23(p1) as a literal matrix product."""
    family = normalize_family(family)
    p3 = middle_param(family, p1, p2) if p3 is None else p3
    return _product(family, [("23", p2), ("12", p3), ("23", p1)])


def check_ybe(family, p1, p2, p3=None):
    """Exact and phase-free residuals between the two sides.

    Also reports the residual with every product reversed, which must agree
    (the equation does not depend on the operator-ordering convention).
    """
    family = normalize_family(family)
    p3 = middle_param(family, p1, p2) if p3 is None else p3
    yl, yr = build_Yl(family, p1, p2, p3), build_Yr(family, p1, p2, p3)
    rl = _product(family, [("12", p2), ("23", p3), ("12", p1)]).matrix
    rr = _product(family, [("23", p1), ("12", p3), ("23", p2)]).matrix
    return {
        "p3": yl.provenance[1][2],
        "exact_residual": float(np.max(np.abs(yl.matrix - yr.matrix))),
        "phase_free_residual": global_phase_distance(yl.matrix, yr.matrix),
        "reversed_residual": float(np.max(np.abs(rl - rr))),
    }


def multiplicative_consistency(theta1, theta2):
    """|tan(pi/4 - t3) - tan(pi/4 - t1) tan(pi/4 - t2)|."""
    t3 = theta3(theta1, theta2)
    return abs(nu_from_theta(t3) - nu_from_theta(theta1) * nu_from_theta(theta2))


def check_braid_relation(b):
    """Braid residual on three qubits and far-commutativity residual on four."""
    b = as_matrix(b)
    b12, b23 = embed_12(b), embed_23(b)
    braid = np.max(np.abs(b12 @ b23 @ b12 - b23 @ b12 @ b23))
    f12 = np.kron(b, np.eye(4))
    f34 = np.kron(np.eye(4), b)
    far = np.max(np.abs(f12 @ f34 - f34 @ f12))
    return {"braid_residual": float(braid), "far_commute_residual": float(far)}
