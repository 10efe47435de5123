"""Schedule-level model of cross-resonance (CR) two-qubit pulses.

Nothing here integrates a Hamiltonian. A Gaussian-square pulse is reduced to
the quantities that matter for duration bookkeeping: its area (which sets the
ZX rotation angle) and its length in samples ``dt``.

Realisations of the Yang-Baxter gates are compiled from gate-level circuits:

* ``CNOT`` is the calibrated echoed-CR schedule, a fixed block;
* a direct ``Rzz(b)`` is an echoed CR pair rescaled to the ZX angle ``|b|``
  (after folding ``b`` into [-pi/2, pi/2] with virtual Z's), with one target
  pulse on each side converting ZX into ZZ;
* a direct ``Rzx(b)`` is the bare rescaled echoed CR pair;
* consecutive single-qubit gates on a wire are merged and cost 0, 1 or 2
  ``sqrt(X)``-type pulses (Z rotations are virtual and free).
"""
from dataclasses import dataclass, field, replace
import math

import numpy as np
from scipy.special import erf

from . import gates
from .circuits import Circuit, expand_rzz, template_r1_two_cnot, template_r2_three_cnot, \
    template_r2_three_rzz, template_r1_rzz

PI = math.pi


@dataclass(frozen=True)
class GaussianSquare:
    amplitude: float
    phase: float
    sigma: float
    width: float
    n_sigma: float

    def __post_init__(self):
        if not 0 <= self.amplitude <= 1:
            raise ValueError(f"amplitude must lie in [0, 1], got {self.amplitude}")
        if self.sigma <= 0 or self.n_sigma <= 0:
            raise ValueError("sigma and n_sigma must be positive")
        if self.width < 0:
            raise ValueError("width must be nonnegative")

    @property
    def duration(self):
        return self.width + 2 * self.n_sigma * self.sigma


def area(p):
    """|A| (width + sigma sqrt(2 pi) erf(n_sigma))."""
    return abs(p.amplitude) * (p.width + gaussian_area_per_amp(p))


def gaussian_area_per_amp(p):
    return p.sigma * math.sqrt(2 * PI) * float(erf(p.n_sigma))


def gaussian_pulse(duration, amplitude, phase=0.0, n_sigma=2.0):
    """Plain Gaussian (zero flat top) filling ``duration`` samples."""
    return GaussianSquare(amplitude, phase, duration / (2 * n_sigma), 0.0, n_sigma)


@dataclass(frozen=True)
class CRBaseline:
    """Calibrated CNOT parameters: one echoed half of the ZX(pi/2) rotation, plus timings.

    The defaults are representative transmon numbers, not measured data.
    """
    cr_pulse: GaussianSquare = GaussianSquare(0.3, 0.0, 64.0, 448.0, 2.0)
    single_pulse_duration: int = 160
    echo_pulse_duration: int = 160
    compensation_amplitude: float = 0.05
    single_amplitude: float = 0.1
    echo_amplitude: float = 0.2

    def __post_init__(self):
        if self.single_pulse_duration <= 0 or self.echo_pulse_duration <= 0:
            raise ValueError("pulse durations must be positive")

    @classmethod
    def from_config(cls, cfg):
        """Build from flat keys (cr_amp, cr_sigma, cr_width, cr_n_sigma, single, echo, ...)."""
        d = cls()
        cr = d.cr_pulse
        cr = GaussianSquare(float(cfg.get("cr_amp", cr.amplitude)), cr.phase,
                            float(cfg.get("cr_sigma", cr.sigma)),
                            float(cfg.get("cr_width", cr.width)),
                            float(cfg.get("cr_n_sigma", cr.n_sigma)))
        return cls(cr,
                   int(cfg.get("single_pulse_duration", d.single_pulse_duration)),
                   int(cfg.get("echo_pulse_duration", d.echo_pulse_duration)),
                   float(cfg.get("compensation_amplitude", d.compensation_amplitude)),
                   float(cfg.get("single_amplitude", d.single_amplitude)),
                   float(cfg.get("echo_amplitude", d.echo_amplitude)))


def rescale_cr(base, theta):
    """CR pulse for a ZX rotation of ``theta`` (0 < theta <= pi/2).

    The target area is ``(2 theta / pi) * area(base.cr_pulse)``. The flat top is
    shortened first; once it is gone the amplitude is lowered instead.
    """
    if not 0 < theta <= PI / 2 + 1e-12:
        raise ValueError(f"theta must lie in (0, pi/2], got {theta}")
    p = base.cr_pulse
    target = min(2 * theta / PI, 1.0) * area(p)
    g = gaussian_area_per_amp(p)
    amp = abs(p.amplitude)
    if target >= amp * g:
        return replace(p, width=max(target / amp - g, 0.0))
    return replace(p, width=0.0, amplitude=target / g)


def fold_zz_angle(beta):
    """Split a ZZ/ZX rotation angle into (effective angle in [0, pi/2], phase, pi_fold).

    Angles are reduced into (-pi, pi]; when ``|beta| > pi/2`` a rotation by
    pi (a Z x Z, done virtually) is split off. A negative remainder is
    realised with pi-phase CR pulses.
    """
    b = math.remainder(beta, 2 * PI)
    fold = False
    if abs(b) > PI / 2:
        b -= math.copysign(PI, b)
        fold = True
    return abs(b), (PI if b < 0 else 0.0), fold


# --- schedules -------------------------------------------------------------------

@dataclass(frozen=True)
class Play:
    pulse: GaussianSquare
    label: str = ""

    @property
    def duration(self):
        return self.pulse.duration


@dataclass(frozen=True)
class Delay:
    duration: float


@dataclass(frozen=True)
class VirtualZ:
    angle: float
    duration: float = 0.0


@dataclass
class PulseSchedule:
    channels: dict = field(default_factory=dict)

    def channel_duration(self, ch):
        return sum(e.duration for e in self.channels.get(ch, ()))

    @property
    def total_duration(self):
        return max((self.channel_duration(ch) for ch in self.channels), default=0.0)

    def _pad(self, ch, t):
        lst = self.channels.setdefault(ch, [])
        gap = t - self.channel_duration(ch)
        if gap > 1e-9:
            lst.append(Delay(gap))

    def play(self, ch, pulse, label="", at=None):
        if at is not None:
            self._pad(ch, at)
        self.channels.setdefault(ch, []).append(Play(pulse, label))
        return self

    def shift_phase(self, ch, angle):
        self.channels.setdefault(ch, []).append(VirtualZ(angle))
        return self

    def barrier(self, chans=None):
        chans = list(self.channels) if chans is None else list(chans)
        t = max((self.channel_duration(c) for c in chans), default=0.0)
        for c in chans:
            self._pad(c, t)
        return t

    def append(self, other, rename=None):
        """Sequential concatenation: ``other`` starts after everything here ends."""
        rename = rename or {}
        t = self.total_duration
        chans = set(self.channels) | {rename.get(c, c) for c in other.channels}
        for c in chans:
            self._pad(c, t)
        for c, entries in other.channels.items():
            self.channels[rename.get(c, c)].extend(entries)
        return self

    def count(self, label):
        return sum(isinstance(e, Play) and e.label == label
                   for lst in self.channels.values() for e in lst)

    def to_dict(self):
        out = {}
        for ch, entries in self.channels.items():
            rows = []
            for e in entries:
                if isinstance(e, Play):
                    p = e.pulse
                    rows.append({"kind": "gs", "duration": int(round(p.duration)), "amp": p.amplitude,
                                 "phase": p.phase, "sigma": p.sigma, "width": p.width,
                                 "n_sigma": p.n_sigma})
                elif isinstance(e, Delay):
                    rows.append({"kind": "delay", "duration": int(round(e.duration))})
                else:
                    rows.append({"kind": "vz", "duration": 0, "phase": e.angle})
            out[ch] = rows
        return {"channels": out, "total_duration": int(round(self.total_duration))}


def _single(base, label="sx"):
    return gaussian_pulse(base.single_pulse_duration, base.single_amplitude), label


def _echoed_pair(base, cr, sched):
    """Two CR pulses with opposite phase, each followed by an echo pi pulse on the control."""
    ratio = cr.amplitude / base.cr_pulse.amplitude if base.cr_pulse.amplitude else 0.0
    comp = replace(cr, amplitude=min(base.compensation_amplitude * ratio, 1.0))
    echo = gaussian_pulse(base.echo_pulse_duration, base.echo_amplitude)
    for k in range(2):
        ph = cr.phase + k * PI
        t = sched.barrier(["dc", "dt", "u"])
        sched.play("u", replace(cr, phase=ph), "cr", at=t)
        sched.play("dt", replace(comp, phase=ph), "compensation", at=t)
        sched.barrier(["dc", "dt", "u"])
        sched.play("dc", echo, "echo")
        sched.barrier(["dc", "dt", "u"])
    return sched


def schedule_cnot(base):
    """Calibrated CNOT: pre pulses, echoed CR pair with compensation, post pulses.

    Channels: ``dc``/``dt`` drive the control/target, ``u`` carries the CR drive.
    """
    s = PulseSchedule({"dc": [], "dt": [], "u": []})
    pulse, lab = _single(base)
    s.play("dc", pulse, lab).play("dt", pulse, lab)
    _echoed_pair(base, base.cr_pulse, s)
    s.play("dc", pulse, lab).play("dt", pulse, lab)
    s.barrier()
    return s


def schedule_rzx_direct(base, beta):
    """Bare echoed CR pair realising Rzx(beta) (no single-qubit dressing)."""
    s = PulseSchedule({"dc": [], "dt": [], "u": []})
    eff, phase, fold = fold_zz_angle(beta)
    if fold:
        # Rzx(+-pi) = -i Z x X: a virtual Z on the control and an X on the target
        s.shift_phase("dc", PI)
        pulse, _ = _single(base)
        s.play("dt", pulse, "x")
        s.barrier()
    if eff > 1e-12:
        _echoed_pair(base, replace(rescale_cr(base, eff), phase=phase), s)
    return s


def schedule_rzz_direct(base, beta):
    """Rzz(beta) from one rescaled echoed CR pair, dressed by a pulse on the target each side."""
    eff, phase, fold = fold_zz_angle(beta)
    s = PulseSchedule({"dc": [], "dt": [], "u": []})
    if fold:
        s.shift_phase("dc", PI).shift_phase("dt", PI)
    if eff <= 1e-12:
        return s
    pulse, lab = _single(base)
    s.play("dt", pulse, lab)
    _echoed_pair(base, replace(rescale_cr(base, eff), phase=phase), s)
    s.play("dt", pulse, lab)
    s.barrier()
    return s


# --- compiling circuits to schedules ----------------------------------------------------

def single_qubit_pulse_count(u, atol=1e-9):
    """Physical pulses needed for a 2x2 unitary when Z rotations are virtual."""
    a, b = abs(u[0, 0]), abs(u[0, 1])
    if b <= atol or a <= atol:
        return 0 if b <= atol else 1
    if abs(a - 1 / math.sqrt(2)) <= atol:
        return 1
    return 2


def _two_qubit_block(op, base, direct):
    name = op.name
    if name == "CNOT":
        return schedule_cnot(base)
    if name == "Rzz" and direct:
        return schedule_rzz_direct(base, op.label.angle)
    if name == "Rzx":
        return schedule_rzx_direct(base, op.label.angle)
    raise ValueError(f"no pulse block for {name} (compile Rzz to CNOTs or use direct=True)")


def compile_schedule(circuit, base, direct=False):
    """ASAP pulse schedule for a gate-level circuit.

    Single-qubit gates are merged per wire between two-qubit blocks. With
    ``direct=False`` an Rzz gate is rejected (compile it with ``expand_rzz``).
    """
    n = circuit.n_qubits
    pending = [np.eye(2, dtype=complex) for _ in range(n)]
    sched = PulseSchedule({f"d{q}": [] for q in range(n)})
    pulse, _ = _single(base)

    def flush(q):
        u = pending[q]
        k = single_qubit_pulse_count(u)
        for _ in range(k):
            sched.play(f"d{q}", pulse, "sx")
        if k == 0 and abs(u[0, 0]) > 1e-9:
            ang = float(np.angle(u[1, 1] / u[0, 0]))
            if abs(ang) > 1e-12:
                sched.shift_phase(f"d{q}", ang)
        pending[q] = np.eye(2, dtype=complex)

    for op in circuit.ops:
        if op.label.n_qubits == 1:
            q = op.qubits[0]
            pending[q] = gates.standard_gate(op.label) @ pending[q]
            continue
        c, t = op.qubits
        flush(c)
        flush(t)
        block = _two_qubit_block(op, base, direct)
        u_ch = f"u{c}{t}"
        chans = [f"d{c}", f"d{t}", u_ch]
        start = max(sched.channel_duration(ch) for ch in chans)
        for ch in chans:
            sched._pad(ch, start)
        for local, ch in (("dc", f"d{c}"), ("dt", f"d{t}"), ("u", u_ch)):
            sched.channels[ch].extend(block.channels.get(local, []))
        sched.barrier(chans)
    for q in range(n):
        flush(q)
    return sched


# --- realisations of the two gate families ---------------------------------------------

REALIZATIONS = {
    "I": ("two_cnot", "rzz_gate", "direct_pulse"),
    "II": ("three_cnot", "three_rzz", "direct_pulse"),
}
CNOT_REALIZATION = {"I": "two_cnot", "II": "three_cnot"}


def direct_r1_circuit(theta):
    """r1(theta) = (H x S) Rzx(-2 theta) (H x S^dag): one CR pair, control Hadamards."""
    c = Circuit(2)
    c.add("H", 0).add("Sdag", 1).add("Rzx", 0, 1, param=-2 * theta).add("H", 0).add("S", 1)
    return c


def realization_circuit(family, param, realization):
    """Gate-level circuit of a realisation; Rzz gates in it are meant as direct pulses."""
    family = gates.normalize_family(family)
    if realization not in REALIZATIONS[family]:
        raise ValueError(f"unknown realization {realization!r} for family {family}")
    if family == "I":
        if realization == "two_cnot":
            return template_r1_two_cnot(param)
        if realization == "rzz_gate":
            return expand_rzz(template_r1_rzz(param))
        return direct_r1_circuit(param)
    if realization == "three_cnot":
        return template_r2_three_cnot(param)
    if realization == "three_rzz":
        return expand_rzz(template_r2_three_rzz(param))
    return template_r2_three_rzz(param)


def realization_schedule(family, param, realization, base=None):
    base = base or CRBaseline()
    circ = realization_circuit(family, param, realization)
    return compile_schedule(circ, base, direct=(realization == "direct_pulse"))


def realization_durations(family, param, base=None):
    """Total duration in dt of every realisation of one gate."""
    family = gates.normalize_family(family)
    return {r: realization_schedule(family, param, r, base).total_duration
            for r in REALIZATIONS[family]}
