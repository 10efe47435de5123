"""Pulse-level cost of each realization under an echoed cross-resonance model."""
import numpy as np

from ybgate import pulse

base = pulse.CRBaseline()
print(base.cr_pulse, base.cr_pulse.duration)

# shorter rotations shrink the flat top first, then the amplitude
for t in (np.pi / 2, np.pi / 4, np.pi / 16):
    p = pulse.rescale_cr(base, t)
    print(f"{t:.3f} width={p.width:.1f} amp={p.amplitude:.4f} area={pulse.area(p):.2f}")

# total schedule duration (dt) for each realization
for family in ("I", "II"):
    for x in (np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2):
        d = pulse.realization_durations(family, x, base)
        print(family, f"{x:.3f}", d)

# direct pulses against the gate-level circuits at pi/4
d1 = pulse.realization_durations("I", np.pi / 4, base)
d2 = pulse.realization_durations("II", np.pi / 4, base)
print(d1["direct_pulse"] / d1["two_cnot"], d2["direct_pulse"] / d2["three_rzz"])

# what a compiled schedule looks like
sched = pulse.realization_schedule("II", np.pi / 4, "direct_pulse", base)
print(sched.total_duration, sched.count("cr"), sorted(sched.channels))
