"""Nonlocal (Weyl chamber) parameters of two-qubit gates and what follows from them.

Coordinates follow the convention

    U = (V1 x V2) exp(i/2 (a1 XX + a2 YY + a3 ZZ)) (V3 x V4),   Vk in SU(2),

restricted to the tetrahedron ``pi - a2 >= a1 >= a2 >= a3 >= 0`` with vertices
O=[0,0,0], A1=[pi,0,0], A2=[pi/2,pi/2,0], A3=[pi/2,pi/2,pi/2].

Points [a1, a2, 0] and [pi - a1, a2, 0] on the base are locally equivalent
once a global phase is allowed. :func:`nonlocal_params` picks between them
using the exact SU(4) class of ``det(U)^(-1/4) U`` (principal root), so a
phase-free gate such as ``rzz(t)`` reports ``[t, 0, 0]`` for all ``t`` in
(0, pi). :func:`local_equivalent` treats the two base points as equal.
"""
from dataclasses import dataclass
from itertools import permutations
import math

import numpy as np

from .matrixcore import (PAULI_X, PAULI_Y, PAULI_Z, as_matrix, haar_random_qubit_states,
                         unitarity_error)

PI = math.pi
CHAMBER_ATOL = 1e-9
PARAM_ATOL = 1e-8

MAGIC = np.array([[1, 0, 0, 1j],
                  [0, 1j, 1, 0],
                  [0, 1j, -1, 0],
                  [1, 0, 0, -1j]], dtype=complex) / math.sqrt(2)

# signs of XX, YY, ZZ on the magic basis vectors (rows: XX, YY, ZZ)
_SIGNS = np.array([
    np.real(np.diag(MAGIC.conj().T @ np.kron(p, p) @ MAGIC))
    for p in (PAULI_X, PAULI_Y, PAULI_Z)
])

_FLIPS = (np.array([1, 1, 1]), np.array([-1, -1, 1]),
          np.array([-1, 1, -1]), np.array([1, -1, -1]))


@dataclass(frozen=True)
class NonlocalParams:
    a1: float
    a2: float
    a3: float

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))

    def as_array(self):
        return np.array([self.a1, self.a2, self.a3])

    def in_chamber(self, atol=CHAMBER_ATOL):
        a1, a2, a3 = self
        return (PI - a2 + atol >= a1 >= a2 - atol and a2 >= a3 - atol and a3 >= -atol)

    def __repr__(self):
        return f"NonlocalParams({self.a1:.12g}, {self.a2:.12g}, {self.a3:.12g})"


def canonical_gate(a1, a2, a3):
    """exp(i/2 (a1 XX + a2 YY + a3 ZZ))."""
    lam = 0.5 * (_SIGNS.T @ np.array([a1, a2, a3], dtype=float))
    return MAGIC @ np.diag(np.exp(1j * lam)) @ MAGIC.conj().T


def _raw_coordinates(u):
    """Coordinates (not yet canonical) of the exact SU(4) class of det-normalised ``u``."""
    u = u / np.linalg.det(u) ** 0.25
    up = MAGIC.conj().T @ u @ MAGIC
    ev = np.linalg.eigvals(up.T @ up)
    lam = np.angle(ev) / 2
    # pick lambda representatives summing to exactly zero; sum(angle/2) is a multiple of pi
    k = int(round(lam.sum() / PI))
    order = np.argsort(-lam) if k > 0 else np.argsort(lam)
    for j in range(abs(k)):
        lam[order[j % 4]] -= math.copysign(PI, k)
    return 0.5 * (_SIGNS @ lam)


def _reduce(x, atol):
    n = math.floor(x / PI)
    r = x - n * PI
    if r > PI - atol:
        r -= PI
        n += 1
    return (r if r > 0 else 0.0), n


def canonicalize(a, atol=CHAMBER_ATOL):
    """Map an arbitrary coordinate triple into the chamber.

    All images under permutations, pair sign flips and pi shifts are scanned;
    representatives reached by an even number of pi shifts are preferred (this
    only matters on the base a3 = 0), then the lexicographically largest.
    """
    a = np.asarray(a, dtype=float)
    best = None
    for perm in permutations(range(3)):
        for flip in _FLIPS:
            b = flip * a[list(perm)]
            red = [_reduce(x, atol) for x in b]
            vals = sorted((r + 0.0 for r, _ in red), reverse=True)
            parity = sum(n for _, n in red) % 2
            if vals[0] + vals[1] > PI + atol:
                continue
            key = (-parity, tuple(round(v / atol) for v in vals))
            if best is None or key > best[0]:
                best = (key, vals)
    return NonlocalParams(*best[1])


def nonlocal_params(u):
    """Canonical Weyl-chamber coordinates [a1, a2, a3] of a two-qubit unitary."""
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise ValueError(f"nonlocal_params needs a 4x4 matrix, got {u.shape}")
    if unitarity_error(u) > 1e-8:
        raise ValueError("nonlocal_params needs a unitary matrix")
    return canonicalize(_raw_coordinates(u))


def _as_params(p):
    if isinstance(p, NonlocalParams):
        return p
    if isinstance(p, np.ndarray) and p.shape == (4, 4):
        return nonlocal_params(p)
    return NonlocalParams(*map(float, p))


def local_invariant_G(p):
    a1, a2, a3 = _as_params(p)
    c = math.cos(a1) ** 2 * math.cos(a2) ** 2 * math.cos(a3) ** 2
    s = math.sin(a1) ** 2 * math.sin(a2) ** 2 * math.sin(a3) ** 2
    return c + s


def entangling_power(p):
    """Closed-form entangling power (2/9)(1 - G)."""
    return 2.0 / 9.0 * (1.0 - local_invariant_G(p))


def linear_entropy_samples(u, n, seed):
    """Linear entropies 1 - tr(rho^2) of ``u`` applied to ``n`` Haar product states."""
    if n <= 0:
        raise ValueError("sample count must be positive")
    u = as_matrix(u)
    ss = np.random.SeedSequence(seed)
    s1, s2 = ss.spawn(2)
    psi1 = haar_random_qubit_states(n, s1)
    psi2 = haar_random_qubit_states(n, s2)
    prod = (psi1[:, :, None] * psi2[:, None, :]).reshape(n, 4)
    out = (prod @ u.T).reshape(n, 2, 2)
    rho = out @ np.conj(np.transpose(out, (0, 2, 1)))
    purity = np.einsum("nij,nji->n", rho, rho).real
    return 1.0 - purity


def entangling_power_montecarlo(u, n, seed=0, return_stderr=False):
    """Monte-Carlo estimate of the entangling power from Haar product inputs."""
    e = linear_entropy_samples(u, n, seed)
    mean = float(e.mean())
    if return_stderr:
        return mean, float(e.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return mean


def is_perfect_entangler(p, atol=CHAMBER_ATOL):
    """Whether the gate can map some product state to a maximally entangled one."""
    a = _as_params(p).as_array()
    for j, k, l in permutations(range(3)):
        s_jk = a[j] + a[k]
        s_jl = a[j] + a[l] + PI / 2
        for lo, hi in ((PI / 2, PI), (3 * PI / 2, 2 * PI)):
            if lo - atol <= s_jk <= s_jl + atol and s_jl <= hi + atol:
                return True
    return False


def satisfies_min_rzz(p, theta, n, atol=CHAMBER_ATOL):
    """Sufficient condition for building the gate from ``n`` Rzz(theta) applications (n >= 3)."""
    if n < 3:
        raise ValueError("the Rzz-count criterion is only stated for n >= 3")
    if not 0 < theta < PI:
        raise ValueError("theta must lie in (0, pi)")
    a1, a2, a3 = _as_params(p)
    total = a1 + a2 + a3
    return bool((-atol <= total <= n * theta + atol) or (a1 - a2 - a3 >= PI - n * theta - atol))


def min_cnot_count(p, atol=PARAM_ATOL):
    a1, a2, a3 = _as_params(p)
    if max(abs(a1), abs(a2), abs(a3)) <= atol:
        return 0
    if abs(a1 - PI / 2) <= atol and abs(a2) <= atol and abs(a3) <= atol:
        return 1
    if abs(a3) <= atol:
        return 2
    return 3


def _base_mirror(p):
    return NonlocalParams(PI - p.a1, p.a2, p.a3)


def local_equivalent(u, v, atol=PARAM_ATOL):
    pu, pv = _as_params(u), _as_params(v)
    if np.max(np.abs(pu.as_array() - pv.as_array())) <= atol:
        return True
    if abs(pu.a3) <= atol and abs(pv.a3) <= atol:
        mirror = _base_mirror(pu).as_array()
        return bool(np.max(np.abs(mirror - pv.as_array())) <= atol)
    return False
