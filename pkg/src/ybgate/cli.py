"""Command-line entry point: ``python -m ybgate <subcommand>``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or invalid input.
"""
import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import circuits, gates, noisetomo, pulse, weyl, ybe
from .matrixcore import global_phase_distance

PI = math.pi
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*(?:e[+-]?\d+)?)?\s*\*?\s*(-?)pi\s*(?:/\s*(\d+\.?\d*))?\s*$", re.I)


def parse_angle(text):
    """Radians from '0.3', 'pi', '-pi/4', '3pi/4' or '3*pi/4'."""
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        pass
    m = _ANGLE.match(s)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")
    coef, neg, den = m.groups()
    c = 1.0 if coef in (None, "", "+") else -1.0 if coef == "-" else float(coef)
    if neg:
        c = -c
    return c * PI / (float(den) if den else 1.0)


def fmt(x):
    return f"{x:.12g}"


def load_config(path):
    """key=value lines; '#' starts a comment."""
    cfg = {}
    if not path:
        return cfg
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    for i, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {i}: expected key=value")
        k, v = line.split("=", 1)
        cfg[k.strip()] = v.strip()
    return cfg


def _settings(args):
    cfg = load_config(args.config)
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        cfg[k.strip()] = v.strip()
    try:
        base = pulse.CRBaseline.from_config(cfg)
        nm = noisetomo.NoiseModel.from_config(cfg, noisetomo.calibrated_noise_model(base))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc
    return base, nm


def _matrix_json(u):
    return {"real": np.round(u.real, 15).tolist(), "imag": np.round(u.imag, 15).tolist()}


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _emit(args, payload, rows=None, header=None):
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in r])
        text = buf.getvalue()
    elif isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------------

def default_rzz_angle(family, param):
    a = (2 * param if family == "I" else param) % PI
    return a if a > 1e-12 else PI / 2


def cmd_gate_info(args):
    family = gates.normalize_family(args.family)
    u = gates.yb_gate(family, args.param)
    p = weyl.nonlocal_params(u)
    rzz_angle = args.rzz_angle if args.rzz_angle is not None else default_rzz_angle(family, args.param)
    report = {
        "family": family,
        "param": args.param,
        "matrix": _matrix_json(u),
        "nonlocal_params": list(p.as_array()),
        "entangling_power": weyl.entangling_power(p),
        "perfect_entangler": weyl.is_perfect_entangler(p),
        "min_cnot": weyl.min_cnot_count(p),
        "min_rzz_angle": rzz_angle,
        "min_rzz": {str(n): weyl.satisfies_min_rzz(p, rzz_angle, n) for n in range(3, 7)},
    }
    _emit(args, report)
    return EXIT_OK


def _template_for(family, param, realization):
    return pulse.realization_circuit(family, param, realization)


def cmd_decompose(args):
    family = gates.normalize_family(args.family)
    names = [args.realization] if args.realization else list(pulse.REALIZATIONS[family])
    out = []
    for r in names:
        c = _template_for(family, args.param, r)
        dist, phase = circuits.template_residual(c, gates.yb_gate(family, args.param))
        out.append({"realization": r, "circuit": c.to_dict(), "residual": dist, "global_phase": phase})
    rows = [(o["realization"], len(o["circuit"]["ops"]), o["circuit"]["ops"] and
             sum(op["name"] == "CNOT" for op in o["circuit"]["ops"]), o["residual"]) for o in out]
    _emit(args, {"family": family, "param": args.param, "decompositions": out},
          rows, ["realization", "n_ops", "n_cnot", "residual"])
    return EXIT_OK


def verification_checks(seed=0, inject_wrong=False):
    """All residual checks as (id, residual) pairs."""
    rng = np.random.default_rng(seed)
    checks = []
    grid = np.linspace(0.05, PI - 0.05, 25)
    for name, (builder, fam) in circuits.TEMPLATES.items():
        worst = 0.0
        for a in grid:
            target = gates.yb_gate(fam, a)
            c = builder(a, literal=True) if inject_wrong else builder(a)
            worst = max(worst, global_phase_distance(circuits.unitary_of(c), target))
        checks.append((f"template:{name}", worst))
    braid = circuits.template_braid_cnot(z_before_h=inject_wrong)
    checks.append(("template:braid_cnot",
                   global_phase_distance(circuits.unitary_of(braid), gates.braid_gate())))
    for r in circuits.verify_appendix_identities(10, seed):
        checks.append((f"appendix:{r['id']}", r["residual"]))
    for name, b in (("braid", gates.braid_gate()), ("swap", gates.SWAP)):
        res = ybe.check_braid_relation(b)
        checks.append((f"braid_relation:{name}", max(res.values())))
    for fam in ("I", "II"):
        worst = 0.0
        for _ in range(100):
            p1, p2 = rng.uniform(-PI, PI, 2)
            worst = max(worst, ybe.check_ybe(fam, p1, p2)["exact_residual"])
        checks.append((f"ybe:{fam}", worst))
    return checks


def cmd_verify(args):
    checks = verification_checks(args.seed, args.inject_wrong)
    failed = [cid for cid, r in checks if not r <= args.tol]
    rows = [(cid, r, "pass" if r <= args.tol else "FAIL") for cid, r in checks]
    _emit(args, {"tol": args.tol, "checks": [{"id": c, "residual": r, "pass": s == "pass"} for c, r, s in rows],
                 "failed": failed}, rows, ["check", "residual", "status"])
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _estimate(channel, n_qubits, args, seed):
    if not args.shots:
        return channel
    recs = noisetomo.tomography_records(channel, n_qubits, "shots", args.shots, args.repeats, seed)
    return noisetomo.reconstruct_choi(recs, n_qubits)


def cmd_ybe(args):
    family = gates.normalize_family(args.family)
    res = ybe.check_ybe(family, args.p1, args.p2)
    report = {"family": family, "p1": args.p1, "p2": args.p2, "p3": res["p3"],
              "exact_residual": res["exact_residual"], "phase_free_residual": res["phase_free_residual"]}
    if args.noise or args.shots:
        base, nm = _settings(args)
        if not args.noise:
            nm = noisetomo.NoiseModel()
        ch = noisetomo.ybe_noisy_channels(family, args.p1, args.p2, base, nm, args.realization,
                                          args.noise_placement)
        el = _estimate(ch["Y_l"], 3, args, args.seed)
        er = _estimate(ch["Y_r"], 3, args, args.seed + 1)
        report.update({
            "mode": "shots" if args.shots else "exact",
            "duration_dt": ch["duration"],
            "noise_placement": args.noise_placement,
            "depolarizing_p": ch["p"],
            "F_Yl_Yr": noisetomo.process_fidelity_channels(el, er),
            "F_Yl_ideal": noisetomo.average_gate_fidelity(el, ch["ideal"]),
            "F_Yr_ideal": noisetomo.average_gate_fidelity(er, ch["ideal_r"]),
        })
    _emit(args, report)
    return EXIT_OK


def sweep_rows(family, params, realizations, base, nm, shots=None, repeats=4, seed=0):
    """Rows (param, realization, duration, f_avg, error reduction vs the CNOT realisation)."""
    family = gates.normalize_family(family)
    ref = pulse.CNOT_REALIZATION[family]
    rows = []
    for i, a in enumerate(params):
        durs = pulse.realization_durations(family, a, base)
        u = gates.yb_gate(family, a)
        fid = {}
        for j, r in enumerate(pulse.REALIZATIONS[family]):
            if r not in realizations and r != ref:
                continue
            ch = noisetomo.depolarized_unitary(u, nm.probability(durs[r]))
            if shots:
                recs = noisetomo.tomography_records(ch, 2, "shots", shots, repeats, [seed, i, j])
                ch = noisetomo.reconstruct_choi(recs, 2)
            fid[r] = noisetomo.average_gate_fidelity(ch, u)
        for r in pulse.REALIZATIONS[family]:
            if r in realizations:
                er = noisetomo.error_reduction(fid[r], fid[ref]) if fid[ref] < 1 else 0.0
                rows.append((float(a), r, float(durs[r]), fid[r], er))
    return rows


SWEEP_HEADER = ["param_rad", "realization", "duration_dt", "f_avg", "error_reduction_vs_cnot"]


def cmd_sweep(args):
    family = gates.normalize_family(args.family)
    if args.count < 2:
        raise UsageError("grid count must be at least 2")
    if not (0 <= args.start <= PI and 0 <= args.stop <= PI):
        raise UsageError("grid must lie within [0, pi]")
    valid = pulse.REALIZATIONS[family]
    reals = args.realizations.split(",") if args.realizations else list(valid)
    bad = [r for r in reals if r not in valid]
    if bad:
        raise UsageError(f"realizations {bad} not available for family {family}")
    base, nm = _settings(args)
    grid = np.linspace(args.start, args.stop, args.count)
    rows = sweep_rows(family, grid, reals, base, nm, args.shots, args.repeats, args.seed)
    payload = [dict(zip(SWEEP_HEADER, r)) for r in rows]
    _emit(args, payload, rows, SWEEP_HEADER)
    return EXIT_OK


def cmd_tomography(args):
    family = gates.normalize_family(args.family)
    base, nm = _settings(args)
    if args.realization not in pulse.REALIZATIONS[family]:
        raise UsageError(f"unknown realization {args.realization!r}")
    ch = noisetomo.noisy_realization(family, args.param, args.realization, base, nm)
    mode = "shots" if args.shots else "exact"
    recs = noisetomo.tomography_records(ch, 2, mode, args.shots or 4096, args.repeats, args.seed)
    if args.format == "csv":
        _emit(args, noisetomo.records_to_csv(recs))
    else:
        est = noisetomo.reconstruct_choi(recs, 2)
        u = gates.yb_gate(family, args.param)
        _emit(args, {"family": family, "param": args.param, "realization": args.realization,
                     "mode": mode, "n_records": len(recs),
                     "f_avg_true": noisetomo.average_gate_fidelity(ch, u),
                     "f_avg_estimate": noisetomo.average_gate_fidelity(est, u)})
    return EXIT_OK


def cmd_pulse_duration(args):
    family = gates.normalize_family(args.family)
    base, _ = _settings(args)
    if args.realization:
        if args.realization not in pulse.REALIZATIONS[family]:
            raise UsageError(f"unknown realization {args.realization!r}")
        _emit(args, pulse.realization_schedule(family, args.param, args.realization, base).to_dict())
        return EXIT_OK
    d = pulse.realization_durations(family, args.param, base)
    _emit(args, {"family": family, "param": args.param, "durations_dt": d,
                 "cnot_dt": pulse.schedule_cnot(base).total_duration},
          [(r, v) for r, v in d.items()], ["realization", "duration_dt"])
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _common(suppress):
    c = argparse.ArgumentParser(add_help=False)

    def d(v):
        return argparse.SUPPRESS if suppress else v

    c.add_argument("--seed", type=int, default=d(0))
    c.add_argument("--tol", type=float, default=d(1e-10))
    c.add_argument("--format", choices=("csv", "json"), default=d(None),
                   help="output format (sweep defaults to csv, everything else to json)")
    c.add_argument("--out", default=d(None))
    c.add_argument("--config", default=d(None), help="key=value file for pulse and noise parameters")
    c.add_argument("--set", action="append", metavar="KEY=VALUE", default=d(None),
                   help="override a config key")
    return c


def build_parser():
    # global flags may appear before or after the subcommand
    common = _common(suppress=True)
    p = argparse.ArgumentParser(prog="ybgate", description="Yang-Baxter gate analysis toolkit",
                                parents=[_common(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    def fam_param(sp, param=True):
        sp.add_argument("--family", required=True, choices=("I", "II", "1", "2"))
        if param:
            sp.add_argument("--param", required=True, type=parse_angle)

    sp = sub.add_parser("gate-info", parents=[common])
    fam_param(sp)
    sp.add_argument("--rzz-angle", type=parse_angle, default=None)
    sp.set_defaults(func=cmd_gate_info)

    sp = sub.add_parser("decompose", parents=[common])
    fam_param(sp)
    sp.add_argument("--realization", default=None)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--inject-wrong", action="store_true", help="negative control: use faulty templates")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ybe", parents=[common])
    sp.add_argument("--family", required=True, choices=("I", "II", "1", "2"))
    sp.add_argument("--p1", required=True, type=parse_angle)
    sp.add_argument("--p2", required=True, type=parse_angle)
    sp.add_argument("--noise", action="store_true")
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--repeats", type=int, default=4)
    sp.add_argument("--realization", default="direct_pulse")
    sp.add_argument("--noise-placement", choices=("global", "per_gate"), default="global",
                    help="one depolarizing per side, or two-qubit depolarizing after each gate")
    sp.set_defaults(func=cmd_ybe)

    sp = sub.add_parser("sweep", parents=[common])
    sp.add_argument("--family", required=True, choices=("I", "II", "1", "2"))
    sp.add_argument("--start", type=parse_angle, default=0.0)
    sp.add_argument("--stop", type=parse_angle, default=PI / 2)
    sp.add_argument("--count", type=int, default=9)
    sp.add_argument("--realizations", default=None, help="comma-separated subset")
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--repeats", type=int, default=4)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("tomography", parents=[common])
    fam_param(sp)
    sp.add_argument("--realization", default="direct_pulse")
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--repeats", type=int, default=4)
    sp.set_defaults(func=cmd_tomography)

    sp = sub.add_parser("pulse-duration", parents=[common])
    fam_param(sp)
    sp.add_argument("--realization", default=None, help="emit the full schedule JSON of one realization")
    sp.set_defaults(func=cmd_pulse_duration)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "shots", None) is not None and args.shots <= 0:
        parser.error("--shots must be positive")
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
