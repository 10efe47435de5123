"""Small dense complex linear algebra shared by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
helpers here only add the handful of checks and comparisons that the gate,
circuit and channel code keep needing.
"""
import numpy as np

DEFAULT_ATOL = 1e-10
UNITARY_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a):
    """Return ``a`` as a square complex128 array, raising on bad shapes."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a):
    return np.conj(np.asarray(a)).T


def kron(a, b):
    """Kronecker product with the first argument as the most significant factor."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def unitarity_error(u):
    u = as_matrix(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u, atol=UNITARY_ATOL):
    return unitarity_error(u) <= atol


def max_abs_diff(u, v):
    u, v = as_matrix(u), as_matrix(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.max(np.abs(u - v)))


def phase_alignment(u, v):
    """Unit-modulus ``g`` minimising ``max|u - g v|`` (approximately).

    Uses the phase of ``tr(v^dag u)`` when that trace is not tiny; otherwise
    falls back to the phase of ``u/v`` at the entry where ``v`` is largest.
    """
    u, v = as_matrix(u), as_matrix(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    t = np.trace(v.conj().T @ u)
    if abs(t) > 1e-12:
        return t / abs(t)
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0 or abs(u[idx]) == 0:
        return 1.0 + 0j
    r = u[idx] / v[idx]
    return r / abs(r)


def global_phase_distance(u, v):
    """Max-entry distance between ``u`` and ``v`` after removing a global phase.

    An upper bound on the minimum over all phases that vanishes exactly when
    ``u`` is a phase multiple of ``v``; near that case it stays within a small
    factor of the minimum.
    """
    g = phase_alignment(u, v)
    return float(np.max(np.abs(as_matrix(u) - g * as_matrix(v))))


def allclose_up_to_phase(u, v, atol=DEFAULT_ATOL):
    return global_phase_distance(u, v) <= atol


def haar_random_qubit_state(seed):
    """Haar-random single-qubit pure state, deterministic in ``seed``.

    Two i.i.d. standard complex Gaussians, normalised.
    """
    rng = np.random.default_rng(seed)
    return _normalise(rng.standard_normal(2) + 1j * rng.standard_normal(2))


def haar_random_qubit_states(n, seed):
    """``n`` Haar-random qubit states as an ``(n, 2)`` array."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_unitary(dim, seed):
    """Haar-random element of U(dim) (QR of a Ginibre matrix with phase fix)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_random_su2(seed):
    u = haar_random_unitary(2, seed)
    return u / np.sqrt(np.linalg.det(u))


def _normalise(psi):
    return psi / np.linalg.norm(psi)
