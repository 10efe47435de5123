"""Acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with the measured quantity and the
tolerance it was judged against, then asserts the same condition.
"""
import math
import time

import numpy as np
import pytest

from ybgate import circuits, gates, noisetomo as nt, pulse, weyl, ybe
from ybgate.matrixcore import haar_random_su2, haar_random_unitary

PI = math.pi


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def test_criterion_01_template_exactness(report):
    grid = np.linspace(-PI, PI, 25)
    t0 = time.perf_counter()
    worst = {}
    for name, (build, family) in circuits.TEMPLATES.items():
        worst[name] = max(circuits.template_residual(build(x), gates.yb_gate(family, x))[0] for x in grid)
    # parameter-free, one evaluation covers it
    worst["braid_cnot"] = circuits.template_residual(circuits.template_braid_cnot(), gates.braid_gate())[0]
    elapsed = time.perf_counter() - t0
    top = max(worst.values())
    ok = top <= 1e-10 and elapsed < 1.0
    report(1, ok, f"max template distance {top:.2e} (<= 1e-10) over {len(worst)} templates, "
                  f"runtime {elapsed:.3f} s (< 1 s)")
    assert ok, worst


def test_criterion_02_appendix_identities(report):
    rows = circuits.verify_appendix_identities(n_angles=10, seed=2)
    identities = [r for r in rows if not r["id"].startswith("chain:")]
    chain = [r for r in rows if r["id"].startswith("chain:")]
    top = max(r["residual"] for r in rows)
    ok = len(identities) == 5 and len(chain) == 5 and top <= 1e-10
    report(2, ok, f"{len(identities)} identities + {len(chain)} chain equalities at 10 angles, "
                  f"max residual {top:.2e} (<= 1e-10)")
    assert ok, rows


def _dress(u, ss):
    w = [haar_random_su2(s) for s in ss.spawn(4)]
    return np.kron(w[0], w[1]) @ u @ np.kron(w[2], w[3])


def test_criterion_03_weyl(report):
    cases = [(gates.CNOT, [PI / 2, 0, 0]), (gates.SWAP, [PI / 2] * 3)]
    cases += [(gates.rzz(t), [t, 0, 0]) for t in np.linspace(0.1, PI - 0.1, 8)]
    cases += [(gates.r1(t), [2 * t, 0, 0]) for t in np.linspace(0.1, PI / 2 - 0.1, 8)]
    for phi in np.linspace(0.1, PI - 0.1, 12):
        cases.append((gates.r2(phi), [phi] * 3 if phi <= PI / 2 else [phi, PI - phi, PI - phi]))
    value_err = max(np.max(np.abs(weyl.nonlocal_params(u).as_array() - want)) for u, want in cases)

    root = np.random.SeedSequence(3)
    dress_err = 0.0
    for (u, _), ss in zip(cases, root.spawn(len(cases))):
        ref = weyl.nonlocal_params(u).as_array()
        for s in ss.spawn(100):
            dress_err = max(dress_err, np.max(np.abs(weyl.nonlocal_params(_dress(u, s)).as_array() - ref)))
    ok = value_err <= 1e-8 and dress_err <= 1e-8
    report(3, ok, f"value error {value_err:.2e}, dressing error {dress_err:.2e} over 100 SU(2) "
                  f"dressings of {len(cases)} gates (both <= 1e-8)")
    assert ok


def test_criterion_04_entangling_power(report):
    t0 = time.perf_counter()
    worst = 0.0
    for family, closed in (("I", lambda t: 2 / 9 * math.sin(2 * t) ** 2),
                           ("II", lambda t: 1 / 6 * math.sin(2 * t) ** 2)):
        for k, x in enumerate(np.linspace(0.1, PI / 2, 10)):
            u = gates.yb_gate(family, x)
            mc = weyl.entangling_power_montecarlo(u, 100_000, seed=[4, k])
            worst = max(worst, abs(mc - closed(x)), abs(weyl.entangling_power(u) - closed(x)))
    elapsed = time.perf_counter() - t0
    ep_cnot = weyl.entangling_power(weyl.nonlocal_params(gates.CNOT))
    ok = worst <= 3e-3 and ep_cnot == 2 / 9 and elapsed < 30
    report(4, ok, f"max |MC - closed form| {worst:.2e} (<= 3e-3), e_p(CNOT) = {ep_cnot!r} "
                  f"(== 2/9), runtime {elapsed:.2f} s (< 30 s)")
    assert ok


def test_criterion_05_theorems(report):
    grid = [k * PI / 16 for k in range(17)]
    wrong = []
    for family in ("I", "II"):
        for x in grid:
            pe = weyl.is_perfect_entangler(gates.yb_gate(family, x))
            expect = any(abs(x - t) < 1e-12 for t in (PI / 4, 3 * PI / 4))
            if pe != expect:
                wrong.append(("perfect entangler", family, x))
    for phi in np.linspace(PI / 200, PI / 2, 100):
        if not weyl.satisfies_min_rzz(gates.r2(phi), phi, 3):
            wrong.append(("min rzz", phi))
    for theta in np.linspace(0.01, PI / 2 - 0.01, 60):
        want = 1 if abs(theta - PI / 4) < 1e-12 else 2
        if weyl.min_cnot_count(gates.r1(theta)) != want:
            wrong.append(("cnot r1", theta))
    if weyl.min_cnot_count(gates.r1(PI / 4)) != 1:
        wrong.append(("cnot r1", PI / 4))
    for phi in np.linspace(0.01, PI / 2 - 0.01, 60):
        if weyl.min_cnot_count(gates.r2(phi)) != 3:
            wrong.append(("cnot r2", phi))
    ok = not wrong
    report(5, ok, f"{len(wrong)} theorem violations on grids containing pi/4 and 3pi/4")
    assert ok, wrong


def test_criterion_06_ybe(report):
    rng = np.random.default_rng(6)
    worst = 0.0
    count = 0
    pairs = {"I": [tuple(rng.uniform(-PI, PI, 2)) for _ in range(100)],
             "II": [tuple(rng.uniform(-PI, PI, 2)) for _ in range(100)]}
    pairs["I"] += [(0.9, 0.9 - PI / 2), (0.2, 0.2 + PI / 2)]  # cos(theta1 - theta2) = 0
    pairs["II"] += [(PI / 2, 0.4), (0.4, PI / 2), (PI / 2, PI / 2)]
    for family, ps in pairs.items():
        for p1, p2 in ps:
            worst = max(worst, ybe.check_ybe(family, p1, p2)["exact_residual"])
            count += 1
    control = min(ybe.check_ybe(f, 0.3, 0.5, ybe.middle_param(f, 0.3, 0.5) + 0.2)["phase_free_residual"]
                  for f in ("I", "II"))
    ok = worst <= 1e-10 and control > 1e-2
    report(6, ok, f"max residual {worst:.2e} (<= 1e-10) over {count} pairs incl. boundaries; "
                  f"wrong-middle control {control:.3f} (> 1e-2)")
    assert ok


def test_criterion_07_braid(report):
    b = ybe.check_braid_relation(gates.braid_gate())["braid_residual"]
    s = ybe.check_braid_relation(gates.SWAP)["braid_residual"]
    c = ybe.check_braid_relation(gates.CNOT)["braid_residual"]
    ok = b <= 1e-12 and s <= 1e-12 and c > 0.1
    report(7, ok, f"braid gate {b:.1e}, SWAP {s:.1e} (<= 1e-12); CNOT {c:.3f} (> 0.1)")
    assert ok


def test_criterion_08_pulse(report):
    base = pulse.CRBaseline()
    ratio_err = max(abs(pulse.area(pulse.rescale_cr(base, t)) / pulse.area(base.cr_pulse) - 2 * t / PI)
                    for t in np.linspace(0.01, PI / 2, 60))
    d1 = pulse.realization_durations("I", PI / 4, base)
    d2 = pulse.realization_durations("II", PI / 4, base)
    r1 = d1["direct_pulse"] / d1["two_cnot"]
    r2 = d2["direct_pulse"] / d2["three_rzz"]
    ok = ratio_err <= 1e-9 and r1 < 0.5 and 0.28 <= r2 <= 0.40
    report(8, ok, f"area ratio error {ratio_err:.1e} (<= 1e-9); family I direct/two-CNOT "
                  f"{r1:.3f} (< 0.5); family II direct/three-Rzz {r2:.3f} (in [0.28, 0.40])")
    assert ok


def _random_channel(n_qubits, p, seed):
    u = haar_random_unitary(2 ** n_qubits, seed)
    return nt.depolarized_unitary(u, p), u


def test_criterion_09_tomography(report):
    round_trip = 0.0
    for n in (2, 3):
        for k, p in enumerate((0.0, 0.05, 0.2)):
            ch, _ = _random_channel(n, p, [9, n, k])
            est = nt.reconstruct_choi(nt.tomography_records(ch, n, "exact"), n)
            round_trip = max(round_trip, np.max(np.abs(est.choi - ch.choi)))
    u = haar_random_unitary(4, 91)
    f_unit = nt.average_gate_fidelity(
        nt.reconstruct_choi(nt.tomography_records(nt.choi_of_unitary(u), 2, "exact"), 2), u)

    covered, errs = 0, []
    for s in range(20):
        ch, u = _random_channel(2, (0.0, 0.05, 0.2)[s % 3], [92, s])
        truth = nt.average_gate_fidelity(ch, u)
        recs = nt.tomography_records(ch, 2, "shots", shots=4096, repeats=4, seed=s)
        err = abs(nt.average_gate_fidelity(nt.reconstruct_choi(recs, 2), u) - truth)
        errs.append(err)
        covered += err <= 0.02
    n2 = len(nt.tomography_records(nt.identity_channel(4), 2, "exact"))
    n3 = len(nt.tomography_records(nt.identity_channel(8), 3, "exact"))
    ok = (round_trip <= 1e-8 and abs(f_unit - 1) <= 1e-8 and covered / 20 >= 0.95
          and n2 == 144 and n3 == 1728)
    report(9, ok, f"exact round trip {round_trip:.1e} (<= 1e-8); unitary F_avg - 1 = {f_unit - 1:.1e} "
                  f"(|.| <= 1e-8); shots coverage {covered}/20 within 0.02 (>= 95%, worst "
                  f"{max(errs):.4f}); records {n2} and {n3} (144, 1728)")
    assert ok


def _shots_trial(k):
    """One pre-registered trial: alternating family, random pair, independent streams."""
    family = "I" if k % 2 == 0 else "II"
    p1, p2 = np.random.default_rng([10, k]).uniform(0, PI / 2, 2)
    row, = nt.ybe_fidelity_sweep(family, [(p1, p2)], ["direct_pulse"], mode="shots",
                                 shots=4096, repeats=4, seed=[11, k])
    return row


def test_criterion_10_model_trends(report):
    base = pulse.CRBaseline()
    nm = nt.calibrated_noise_model(base)
    anchor = nt.average_gate_fidelity(nt.noisy_realization("I", PI / 4, "two_cnot", base, nm), gates.r1(PI / 4))

    grid = np.linspace(PI / 32, PI / 2, 16)
    below = []
    for family, cnot in (("I", "two_cnot"), ("II", "three_cnot")):
        for x in grid:
            u = gates.yb_gate(family, x)
            fd = nt.average_gate_fidelity(nt.noisy_realization(family, x, "direct_pulse", base, nm), u)
            fc = nt.average_gate_fidelity(nt.noisy_realization(family, x, cnot, base, nm), u)
            if fd < fc:
                below.append((family, x, fd, fc))
    gap = abs(nt.average_gate_fidelity(nt.noisy_realization("II", PI / 2, "direct_pulse", base, nm), gates.r2(PI / 2))
              - nt.average_gate_fidelity(nt.noisy_realization("II", PI / 2, "three_cnot", base, nm), gates.r2(PI / 2)))
    part_a = not below and gap <= 1e-12
    report(10, part_a, f"(a) calibration F_avg {anchor:.4f}; direct >= CNOT at "
                       f"{2 * len(grid) - len(below)}/{2 * len(grid)} grid points; gap at pi/2 {gap:.1e}")

    exact_rows = []
    for family in ("I", "II"):
        exact_rows += nt.ybe_fidelity_sweep(family, [(0.3, 0.5), (1.1, 0.2)], base=base, nm=nm)
    lr = max(abs(r["F_Yl_Yr"] - 1) for r in exact_rows)
    part_b = lr <= 1e-8 and all(r["F_Yl_ideal"] < 1 for r in exact_rows)
    report(10, part_b, f"(b) exact mode |F(Y_l,Y_r) - 1| <= {lr:.1e} (<= 1e-8); "
                       f"max F(Y_l,ideal) {max(r['F_Yl_ideal'] for r in exact_rows):.4f} (< 1)")

    t0 = time.perf_counter()
    trials = [_shots_trial(k) for k in range(50)]
    wins = {"I": [0, 0], "II": [0, 0]}
    for r in trials:
        wins[r["family"]][0] += r["F_Yl_Yr"] >= r["F_Yl_ideal"]
        wins[r["family"]][1] += 1
    total = wins["I"][0] + wins["II"][0]
    part_c = total / 50 >= 0.9
    report(10, part_c, f"(c) shots mode F(Y_l,Y_r) >= F(Y_l,ideal) in {total}/50 trials (>= 90%); "
                       f"family I {wins['I'][0]}/{wins['I'][1]}, family II {wins['II'][0]}/{wins['II'][1]}")

    rng = np.random.default_rng(12)
    for family in ("I", "II"):
        pairs = [tuple(rng.uniform(0, PI / 2, 2)) for _ in range(10)]
        nt.ybe_fidelity_sweep(family, pairs, mode="shots", seed=[13, len(family)])
    elapsed = time.perf_counter() - t0
    part_d = elapsed < 300
    report(10, part_d, f"(d) 3-qubit sweep ({len(trials)} trials + 2 families x 3 realizations x "
                       f"10 pairs, both sides) runtime {elapsed:.1f} s (< 300 s)")

    ok = part_a and part_b and part_c and part_d
    report(10, ok, "overall")
    assert ok
