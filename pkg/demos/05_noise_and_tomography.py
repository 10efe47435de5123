"""Duration-dependent noise, seen through simulated process tomography."""
import numpy as np

from ybgate import gates, noisetomo as nt

# calibrate so the two-CNOT circuit for r1(pi/4) has F_avg = 0.97
nm = nt.calibrated_noise_model()
print(nm)

# shorter schedules decohere less
for family, cnot in (("I", "two_cnot"), ("II", "three_cnot")):
    for x in (np.pi / 8, np.pi / 4, np.pi / 2):
        u = gates.yb_gate(family, x)
        fd = nt.average_gate_fidelity(nt.noisy_realization(family, x, "direct_pulse", nm=nm), u)
        fc = nt.average_gate_fidelity(nt.noisy_realization(family, x, cnot, nm=nm), u)
        print(family, f"{x:.3f}", f"{fd:.4f}", f"{fc:.4f}", f"{nt.error_reduction(fd, fc):.3f}")

# tomography: 16 preparations x 9 bases on two qubits
ch = nt.noisy_realization("II", np.pi / 4, "direct_pulse", nm=nm)
recs = nt.tomography_records(ch, 2, "shots", shots=4096, repeats=4, seed=5)
est = nt.reconstruct_choi(recs, 2)
print(len(recs), nt.average_gate_fidelity(ch, gates.r2(np.pi / 4)),
      nt.average_gate_fidelity(est, gates.r2(np.pi / 4)))

# both YBE sides through tomography, exact and sampled
for mode in ("exact", "shots"):
    for row in nt.ybe_fidelity_sweep("II", [(0.3, 0.5)], mode=mode, seed=6):
        print(mode, row["realization"], f"{row['F_Yl_Yr']:.4f}", f"{row['F_Yl_ideal']:.4f}")

# noise placed after every gate instead of once per side breaks the Y_l = Y_r symmetry
ch = nt.ybe_noisy_channels("I", 0.3, 0.5, noise="per_gate")
print(nt.process_fidelity_channels(ch["Y_l"], ch["Y_r"]))
