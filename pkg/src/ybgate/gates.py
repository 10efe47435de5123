"""Named one- and two-qubit gates and the two Yang-Baxter gate families.

Basis ordering is ``|q0 q1>`` with qubit 0 as the most significant (leftmost)
tensor factor, so ``CNOT`` below has qubit 0 as control.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .matrixcore import I2, PAULI_X, PAULI_Y, PAULI_Z, dagger

SQRT2 = math.sqrt(2.0)

H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
S = np.diag([1, 1j]).astype(complex)
SDAG = np.diag([1, -1j]).astype(complex)
SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
# sqrt(X)^dag written as X sqrt(X), which is how the Appendix-style identities use it
SQRT_XDAG = PAULI_X @ SQRT_X

CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)

BRAID_EIGENVALUES = ((1 + 1j) / SQRT2, (1 - 1j) / SQRT2)

SINGLE_QUBIT = {"H", "S", "Sdag", "X", "Z", "SqrtX", "SqrtXdag", "Rz", "Rx"}
TWO_QUBIT = {"CNOT", "Rzz", "Rzx", "SWAP", "RI", "RII", "Braid"}
PARAMETERIZED = {"Rz", "Rx", "Rzz", "Rzx", "RI", "RII"}
GATE_NAMES = SINGLE_QUBIT | TWO_QUBIT


@dataclass(frozen=True)
class GateLabel:
    name: str
    params: tuple = field(default=())

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        want = 1 if self.name in PARAMETERIZED else 0
        if len(params) != want:
            raise ValueError(f"gate {self.name} takes {want} parameter(s), got {len(params)}")

    @property
    def n_qubits(self):
        return 1 if self.name in SINGLE_QUBIT else 2

    @property
    def angle(self):
        return self.params[0] if self.params else None


@dataclass(frozen=True)
class SpectralParam:
    """Spectral parameter of either family.

    ``angle`` is theta (family I) or phi (family II); ``auxiliary`` is the
    multiplicative nu = tan(pi/4 - theta) or the additive mu = tan(phi), with
    ``math.inf`` standing for the SWAP point phi = pi/2.
    """
    family: str
    angle: float
    auxiliary: float

    @classmethod
    def from_angle(cls, family, angle):
        family = normalize_family(family)
        if family == "I":
            return cls("I", angle, nu_from_theta(angle))
        return cls("II", angle, mu_from_phi(angle))


def normalize_family(family):
    f = str(family).upper().strip()
    if f in ("I", "1"):
        return "I"
    if f in ("II", "2"):
        return "II"
    raise ValueError(f"unknown gate family {family!r}")


def nu_from_theta(theta):
    return math.tan(math.pi / 4 - theta)


def theta_from_nu(nu):
    return math.pi / 4 - math.atan(nu)


def mu_from_phi(phi):
    if _is_half_pi(phi):
        return math.inf
    return math.tan(phi)


def phi_from_mu(mu):
    if math.isinf(mu):
        return math.pi / 2
    return math.atan(mu)


def _is_half_pi(x):
    return abs(x - math.pi / 2) < 1e-15


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rx(theta):
    return math.cos(theta / 2) * I2 - 1j * math.sin(theta / 2) * PAULI_X


def rzz(theta):
    """exp(-i theta Z(x)Z / 2)."""
    phases = np.exp(-0.5j * theta * np.array([1, -1, -1, 1]))
    return np.diag(phases)


def rzx(theta):
    """exp(-i theta Z(x)X / 2)."""
    zx = np.kron(PAULI_Z, PAULI_X)
    return math.cos(theta / 2) * np.eye(4) - 1j * math.sin(theta / 2) * zx


def braid_gate():
    """The 4x4 braid gate with eigenvalues (1 +/- i)/sqrt(2)."""
    return np.array([[1, 0, 0, 1],
                     [0, 1, -1, 0],
                     [0, 1, 1, 0],
                     [-1, 0, 0, 1]], dtype=complex) / SQRT2


def yang_baxterize(nu):
    """(B + nu lam+ lam- B^dag) / sqrt(1 + nu^2) for the braid gate B."""
    if not math.isfinite(nu):
        raise ValueError("nu must be finite")
    b = braid_gate()
    lam = BRAID_EIGENVALUES[0] * BRAID_EIGENVALUES[1]
    return (b + nu * lam * dagger(b)) / math.sqrt(1 + nu * nu)


def r1(theta):
    """First Yang-Baxter family in the angle parameterisation (real rotation)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0, 0, s],
                     [0, c, -s, 0],
                     [0, s, c, 0],
                     [-s, 0, 0, c]], dtype=complex)


def r2(phi):
    """Second Yang-Baxter family: cos(phi) I + i sin(phi) SWAP."""
    if _is_half_pi(phi):
        return 1j * SWAP.copy()
    c, s, e = math.cos(phi), math.sin(phi), np.exp(1j * phi)
    return np.array([[e, 0, 0, 0],
                     [0, c, 1j * s, 0],
                     [0, 1j * s, c, 0],
                     [0, 0, 0, e]], dtype=complex)


def r2_from_mu(mu):
    """(I + i mu P) / (1 + i mu), the rational form; mu = inf gives P."""
    if math.isinf(mu):
        return SWAP.copy()
    return (np.eye(4) + 1j * mu * SWAP) / (1 + 1j * mu)


def yb_gate(family, angle):
    """r1(angle) for family I, r2(angle) for family II."""
    return r1(angle) if normalize_family(family) == "I" else r2(angle)


_FIXED = {
    "H": H, "S": S, "Sdag": SDAG, "X": PAULI_X, "Z": PAULI_Z,
    "SqrtX": SQRT_X, "SqrtXdag": SQRT_XDAG, "CNOT": CNOT, "SWAP": SWAP,
}
_PARAMETRIC = {"Rz": rz, "Rx": rx, "Rzz": rzz, "Rzx": rzx, "RI": r1, "RII": r2}


def standard_gate(label, *params):
    """Matrix of a gate given a ``GateLabel`` or a name plus parameters."""
    if not isinstance(label, GateLabel):
        label = GateLabel(label, params)
    if label.name in _FIXED:
        return _FIXED[label.name].copy()
    if label.name == "Braid":
        return braid_gate()
    return _PARAMETRIC[label.name](label.params[0])


# Pauli aliases re-exported for callers that build Hamiltonians or embeddings
X, Y, Z = PAULI_X, PAULI_Y, PAULI_Z
