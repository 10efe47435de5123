"""Channels as Choi matrices, duration-driven depolarizing noise, and process tomography.

Choi convention: ``J = sum_ij |i><j| (x) E(|i><j|)`` with the input factor
first, so ``Tr J = d`` and ``E(rho) = Tr_in[(rho^T (x) I) J]``.
"""
from dataclasses import dataclass, field
import csv
import io
import itertools
import math

import numpy as np

from . import gates, pulse, ybe
from .matrixcore import dagger, is_unitary

PREP_LABELS = ("Z0", "Z1", "X+", "Y+")
MEAS_LABELS = ("X", "Y", "Z")

_PREP_KETS = {
    "Z0": np.array([1, 0], dtype=complex),
    "Z1": np.array([0, 1], dtype=complex),
    "X+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "Y+": np.array([1, 1j], dtype=complex) / math.sqrt(2),
}
# columns are the +1 and -1 eigenvectors (outcome bits 0 and 1)
_MEAS_BASES = {
    "Z": np.eye(2, dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2),
}


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    dim: int
    choi: np.ndarray
    raw_choi: np.ndarray = field(default=None, repr=False)  # pre-projection estimate, if any

    def __post_init__(self):
        c = np.asarray(self.choi, dtype=complex)
        if c.shape != (self.dim ** 2, self.dim ** 2):
            raise ValueError(f"Choi of a d={self.dim} channel must be {self.dim ** 2}x{self.dim ** 2}")
        object.__setattr__(self, "choi", c)

    def _tensor(self):
        d = self.dim
        return self.choi.reshape(d, d, d, d)  # (i, a, j, b)

    def apply(self, rho):
        return np.einsum("ij,iajb->ab", np.asarray(rho, dtype=complex), self._tensor())

    def superoperator(self):
        """Matrix acting on row-major vec(rho)."""
        d = self.dim
        return self._tensor().transpose(1, 3, 0, 2).reshape(d * d, d * d)

    def partial_trace_output(self):
        return np.einsum("iaja->ij", self._tensor())

    def cptp_errors(self):
        c = self.choi
        herm = float(np.max(np.abs(c - dagger(c))))
        min_eig = float(np.min(np.linalg.eigvalsh((c + dagger(c)) / 2)))
        tp = float(np.max(np.abs(self.partial_trace_output() - np.eye(self.dim))))
        return {"hermiticity": herm, "min_eigenvalue": min_eig, "trace_preservation": tp}

    def is_cptp(self, atol=1e-9):
        e = self.cptp_errors()
        return e["hermiticity"] <= 10 * atol and e["min_eigenvalue"] >= -atol and e["trace_preservation"] <= atol


def from_superoperator(s, dim):
    t = np.asarray(s).reshape(dim, dim, dim, dim).transpose(2, 0, 3, 1)
    return QuantumChannel(dim, t.reshape(dim * dim, dim * dim))


def choi_of_unitary(u):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or not is_unitary(u, atol=1e-9):
        raise ValueError("choi_of_unitary needs a square unitary matrix")
    d = u.shape[0]
    omega = u.T.reshape(-1)  # sum_i |i> (x) u|i>
    return QuantumChannel(d, np.outer(omega, omega.conj()))


def identity_channel(d):
    return choi_of_unitary(np.eye(d))


def depolarizing(d, p):
    if not 0 <= p <= 1:
        raise ValueError(f"depolarizing probability must lie in [0, 1], got {p}")
    return QuantumChannel(d, (1 - p) * identity_channel(d).choi + p * np.eye(d * d) / d)


def compose(first, then):
    """Channel applying ``first`` and then ``then``."""
    if first.dim != then.dim:
        raise ValueError("dimension mismatch in compose")
    return from_superoperator(then.superoperator() @ first.superoperator(), first.dim)


def depolarized_unitary(u, p):
    u = np.asarray(u, dtype=complex)
    return compose(choi_of_unitary(u), depolarizing(u.shape[0], p))


# --- fidelities ------------------------------------------------------------------

def average_gate_fidelity(e, u):
    u = np.asarray(u, dtype=complex)
    d = e.dim
    if u.shape != (d, d):
        raise ValueError("dimension mismatch between channel and unitary")
    f_pro = float(np.real(np.trace(choi_of_unitary(u).choi @ e.choi))) / d ** 2
    return (d * f_pro + 1) / (d + 1)


def _psd_sqrt(m):
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    w = np.where(w > 1e-14 * max(w.max(), 1e-300), w, 0.0)  # rounding noise would turn into ~1e-8 after sqrt
    return (v * np.sqrt(w)) @ dagger(v)


def uhlmann_fidelity(rho, sigma):
    """||sqrt(rho) sqrt(sigma)||_1 ^ 2 for density matrices."""
    s = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(sigma), compute_uv=False)
    return float(np.sum(s) ** 2)


def process_fidelity_channels(e1, e2, average=True):
    """Uhlmann fidelity of the normalised Choi states; as F_avg unless ``average=False``."""
    if e1.dim != e2.dim:
        raise ValueError("dimension mismatch between channels")
    d = e1.dim
    f_pro = min(uhlmann_fidelity(e1.choi / np.trace(e1.choi).real, e2.choi / np.trace(e2.choi).real), 1.0)
    return (d * f_pro + 1) / (d + 1) if average else f_pro


def error_reduction(f_pulse, f_cnot):
    if f_cnot >= 1:
        raise ZeroDivisionError("error reduction undefined for a perfect reference (f_cnot = 1)")
    return (f_pulse - f_cnot) / (1 - f_cnot)


def depolarizing_p_for_fidelity(f_avg, d):
    """Inverse of F_avg = 1 - p (d^2 - 1) / (d (d + 1)) for a depolarized unitary."""
    return (1 - f_avg) * d * (d + 1) / (d * d - 1)


# --- noise model -----------------------------------------------------------------

CALIBRATION_TARGET = 0.97


@dataclass(frozen=True)
class NoiseModel:
    rate_lambda: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        if self.rate_lambda < 0:
            raise ValueError("rate_lambda must be nonnegative")
        if not 0 <= self.p0 < 1:
            raise ValueError("p0 must lie in [0, 1)")

    def probability(self, duration):
        return 1 - (1 - self.p0) * math.exp(-self.rate_lambda * duration)

    @classmethod
    def from_config(cls, cfg, default=None):
        d = default or cls()
        return cls(float(cfg.get("rate_lambda", d.rate_lambda)), float(cfg.get("p0", d.p0)))


def calibrated_noise_model(base=None, target=CALIBRATION_TARGET, p0=0.0):
    """Rate such that the two-CNOT realisation of r1(pi/4) has F_avg = ``target``."""
    base = base or pulse.CRBaseline()
    t = pulse.realization_durations("I", math.pi / 4, base)["two_cnot"]
    p = depolarizing_p_for_fidelity(target, 4)
    return NoiseModel(-math.log((1 - p) / (1 - p0)) / t, p0)


def noisy_realization(family, param, realization, base=None, nm=None):
    base = base or pulse.CRBaseline()
    nm = nm if nm is not None else calibrated_noise_model(base)
    family = gates.normalize_family(family)
    if realization not in pulse.REALIZATIONS[family]:
        raise ValueError(f"unknown realization {realization!r} for family {family}")
    t = pulse.realization_durations(family, param, base)[realization]
    return depolarized_unitary(gates.yb_gate(family, param), nm.probability(t))


def pair_depolarizing(p, pair):
    """Two-qubit depolarizing on ``pair`` ("12" or "23") of three qubits."""
    d = 8
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            rho = np.zeros((d, d), dtype=complex)
            rho[i, j] = 1
            if pair == "12":
                red = np.einsum("aiaj->ij", rho.reshape(4, 2, 4, 2))
                out = np.kron(np.eye(4) / 4, red)
            else:
                red = np.einsum("iaja->ij", rho.reshape(2, 4, 2, 4))
                out = np.kron(red, np.eye(4) / 4)
            choi[i * d:(i + 1) * d, j * d:(j + 1) * d] = (1 - p) * rho + p * out
    return QuantumChannel(d, choi)


def ybe_noisy_channels(family, p1, p2, base=None, nm=None, realization="direct_pulse", noise="global"):
    """Noisy channels of both sides of the YBE and the ideal unitaries.

    ``noise="global"``: each side is its ideal three-qubit unitary followed by
    one depolarizing channel whose probability follows from the summed
    durations of its three gates. Both sides then get identical noise.
    ``noise="per_gate"``: every gate is followed by two-qubit depolarizing on
    its own pair, so the two sides see their noise in different places.
    """
    base = base or pulse.CRBaseline()
    nm = nm if nm is not None else calibrated_noise_model(base)
    family = gates.normalize_family(family)
    p3 = ybe.middle_param(family, p1, p2)
    yl = ybe.build_Yl(family, p1, p2, p3)
    yr = ybe.build_Yr(family, p1, p2, p3)

    def dur(p):
        return pulse.realization_durations(family, p, base)[realization]

    t = dur(p1) + dur(p2) + dur(p3)
    out = {"ideal": yl.matrix, "ideal_r": yr.matrix, "p3": p3, "duration": t}
    if noise == "global":
        p = nm.probability(t)
        out.update({"Y_l": depolarized_unitary(yl.matrix, p), "Y_r": depolarized_unitary(yr.matrix, p), "p": p})
    elif noise == "per_gate":
        for key, op in (("Y_l", yl), ("Y_r", yr)):
            ch = identity_channel(8)
            for pair, _, angle in reversed(op.provenance):  # rightmost factor acts first
                g = gates.yb_gate(family, angle)
                u = ybe.embed_12(g) if pair == "12" else ybe.embed_23(g)
                ch = compose(compose(ch, choi_of_unitary(u)), pair_depolarizing(nm.probability(dur(angle)), pair))
            out[key] = ch
        out["p"] = None
    else:
        raise ValueError(f"unknown noise placement {noise!r}")
    return out


def ybe_fidelity_sweep(family, pairs, realizations=None, base=None, nm=None, mode="exact",
                       shots=4096, repeats=4, seed=0, noise="global"):
    """Tomography of both YBE sides for every (parameter pair, realization).

    Returns dicts with F(Y_l, Y_r), F(Y_l, ideal) and F(Y_r, ideal). In shots
    mode the two sides get independent seed streams derived from ``seed``.
    """
    family = gates.normalize_family(family)
    realizations = realizations or pulse.REALIZATIONS[family]
    rows = []
    streams = iter(np.random.SeedSequence(seed).spawn(2 * len(pairs) * len(realizations)))
    for p1, p2 in pairs:
        for r in realizations:
            ch = ybe_noisy_channels(family, p1, p2, base, nm, r, noise)
            est = {}
            for side in ("Y_l", "Y_r"):
                recs = tomography_records(ch[side], 3, mode, shots, repeats, next(streams))
                est[side] = reconstruct_choi(recs, 3)
            rows.append({
                "family": family, "p1": float(p1), "p2": float(p2), "realization": r,
                "F_Yl_Yr": process_fidelity_channels(est["Y_l"], est["Y_r"]),
                "F_Yl_ideal": average_gate_fidelity(est["Y_l"], ch["ideal"]),
                "F_Yr_ideal": average_gate_fidelity(est["Y_r"], ch["ideal_r"]),
            })
    return rows


# --- tomography ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TomographyRecord:
    prep: tuple
    meas: tuple
    outcomes: np.ndarray  # length 2^n, bitstring index with qubit 0 most significant
    mode: str = "exact"
    seed: int = None

    def bitstrings(self):
        n = len(self.prep)
        return [format(k, f"0{n}b") for k in range(2 ** n)]


def _kron(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def _check_n(n_qubits):
    if n_qubits not in (2, 3):
        raise ValueError(f"tomography supports 2 or 3 qubits, got {n_qubits}")


def tomography_probabilities(channel, n_qubits):
    """Born probabilities, array indexed [prep..., meas..., outcome] (labels in PREP/MEAS order)."""
    _check_n(n_qubits)
    if channel.dim != 2 ** n_qubits:
        raise ValueError("channel dimension does not match n_qubits")
    n = n_qubits
    out = np.empty((4,) * n + (3,) * n + (2 ** n,))
    bases = [_kron([_MEAS_BASES[m] for m in ms]) for ms in itertools.product(MEAS_LABELS, repeat=n)]
    for si, ps in enumerate(itertools.product(PREP_LABELS, repeat=n)):
        ket = _kron([_PREP_KETS[p][:, None] for p in ps])[:, 0]
        rho_out = channel.apply(np.outer(ket, ket.conj()))
        for mi, v in enumerate(bases):
            probs = np.real(np.einsum("ia,ij,ja->a", v.conj(), rho_out, v))
            out[np.unravel_index(si, (4,) * n) + np.unravel_index(mi, (3,) * n)] = probs
    return np.clip(out, 0, None)


def tomography_records(channel, n_qubits, mode="exact", shots=4096, repeats=4, seed=0):
    """One record per (prep, meas) pair: 144 for two qubits, 1728 for three.

    In shots mode each record holds multinomial counts from ``shots * repeats``
    draws, with an independent generator per record derived from ``seed``.
    """
    if mode not in ("exact", "shots"):
        raise ValueError(f"mode must be 'exact' or 'shots', got {mode!r}")
    probs = tomography_probabilities(channel, n_qubits)
    n = n_qubits
    combos = list(itertools.product(itertools.product(PREP_LABELS, repeat=n),
                                    itertools.product(MEAS_LABELS, repeat=n)))
    flat = probs.reshape(len(combos), 2 ** n)
    if mode == "shots":
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        streams = ss.spawn(len(combos))
        if isinstance(seed, np.random.SeedSequence):
            seed = seed.entropy
    records = []
    for k, (ps, ms) in enumerate(combos):
        p = flat[k] / flat[k].sum()
        if mode == "exact":
            records.append(TomographyRecord(ps, ms, p, "exact", None))
        else:
            counts = np.random.default_rng(streams[k]).multinomial(shots * repeats, p)
            records.append(TomographyRecord(ps, ms, counts, "shots", seed))
    return records


def _single_qubit_design():
    """24x16 map from the (in, out, in', out') tensor of a one-qubit Choi block to probabilities."""
    rows = []
    for p in PREP_LABELS:
        rho = np.outer(_PREP_KETS[p], _PREP_KETS[p].conj())
        for m in MEAS_LABELS:
            v = _MEAS_BASES[m]
            for b in range(2):
                proj = np.outer(v[:, b], v[:, b].conj())
                a = np.kron(rho.T, proj)
                rows.append(a.T.reshape(-1))  # p = sum_{y,x} A[x, y] J[y, x]
    return np.array(rows)


_DESIGN = _single_qubit_design()
_DESIGN_PINV = np.linalg.pinv(_DESIGN)


def _records_to_tensor(records, n):
    expected = 4 ** n * 3 ** n
    if len(records) != expected:
        raise ValueError(f"need {expected} records for {n} qubits, got {len(records)}")
    data = np.full((4,) * n + (3,) * n + (2,) * n, np.nan)
    modes = set()
    for r in records:
        if len(r.prep) != n or len(r.meas) != n or len(r.outcomes) != 2 ** n:
            raise ValueError("record does not match the qubit count")
        idx = tuple(PREP_LABELS.index(p) for p in r.prep) + tuple(MEAS_LABELS.index(m) for m in r.meas)
        o = np.asarray(r.outcomes, dtype=float)
        data[idx] = (o / o.sum()).reshape((2,) * n)
        modes.add(r.mode)
    if np.isnan(data).any():
        raise ValueError("record set is incomplete or has duplicates")
    if len(modes) != 1:
        raise ValueError("record set mixes exact and shots modes")
    # interleave to (prep_k, meas_k, bit_k) per qubit, then flatten each triple into 24
    order = [ax for k in range(n) for ax in (k, n + k, 2 * n + k)]
    return data.transpose(order).reshape((24,) * n), modes.pop()


def _simplex_projection(w, total):
    """Euclidean projection of a real vector onto {x >= 0, sum x = total}."""
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - total
    k = np.nonzero(u - css / np.arange(1, len(u) + 1) > 0)[0][-1]
    return np.clip(w - css[k] / (k + 1), 0, None)


def project_positive(choi, d, method="simplex"):
    """Nearest PSD matrix with Tr J = d.

    ``simplex`` clips eigenvalues after a common shift chosen so the trace is
    right (the Frobenius-nearest point). ``clip`` zeroes negative eigenvalues
    and rescales; it is kept for comparison because the rescaling drags
    fidelities down by several percent at realistic shot counts.
    """
    w, v = np.linalg.eigh((choi + dagger(choi)) / 2)
    if method == "simplex":
        w = _simplex_projection(w, float(d))
    elif method == "clip":
        w = np.clip(w, 0, None)
        w = w * d / w.sum()
    else:
        raise ValueError(f"unknown projection method {method!r}")
    return (v * w) @ dagger(v)


def reconstruct_choi(records, n_qubits, project=None, method="simplex"):
    """Linear-inversion estimate of the Choi matrix.

    The frame is a tensor product of one-qubit frames, so the pseudo-inverse
    factorises and is applied one qubit axis at a time. Positivity projection
    defaults to on for shots data and off for exact data.
    """
    _check_n(n_qubits)
    n = n_qubits
    t, mode = _records_to_tensor(records, n)
    for k in range(n):
        t = np.moveaxis(np.tensordot(_DESIGN_PINV, t, axes=([1], [k])), 0, k)
    # per qubit (in, out, in', out') -> (in..., out..., in'..., out'...)
    t = t.reshape((2, 2, 2, 2) * n)
    order = [4 * k + j for j in range(4) for k in range(n)]
    d = 2 ** n
    raw = t.transpose(order).reshape(d * d, d * d)
    raw = (raw + dagger(raw)) / 2
    if project is None:
        project = mode == "shots"
    if project:
        return QuantumChannel(d, project_positive(raw, d, method), raw_choi=raw)
    return QuantumChannel(d, raw)


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["prep", "meas", "bitstring", "probability_or_count", "mode", "seed"])
    for r in records:
        for bits, v in zip(r.bitstrings(), r.outcomes):
            val = int(v) if r.mode == "shots" else f"{float(v):.12g}"
            w.writerow([" ".join(r.prep), " ".join(r.meas), bits, val, r.mode,
                        "" if r.seed is None else r.seed])
    return buf.getvalue()
