import csv
import io
import json
import math

import numpy as np
import pytest

from ybgate import cli

PI = math.pi


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [("0.3", 0.3), ("pi", PI), ("pi/4", PI / 4), ("-pi/2", -PI / 2),
                                        ("3pi/4", 3 * PI / 4), ("3*pi/4", 3 * PI / 4), ("1e-3", 1e-3)])
def test_parse_angle(text, value):
    assert cli.parse_angle(text) == pytest.approx(value, abs=1e-15)


def test_parse_angle_rejects():
    with pytest.raises(Exception):
        cli.parse_angle("quarter")


def test_gate_info_family_one(capsys):
    code, out, _ = run(capsys, "gate-info", "--family", "I", "--param", "pi/4")
    r = json.loads(out)
    assert code == 0
    assert r["min_cnot"] == 1
    assert r["entangling_power"] == pytest.approx(2 / 9, abs=1e-12)
    assert r["perfect_entangler"] is True
    assert set(r["min_rzz"]) == {"3", "4", "5", "6"}
    m = np.array(r["matrix"]["real"]) + 1j * np.array(r["matrix"]["imag"])
    assert m.shape == (4, 4)


def test_gate_info_family_two(capsys):
    r = json.loads(run(capsys, "gate-info", "--family", "II", "--param", "pi/4")[1])
    assert r["entangling_power"] == pytest.approx(1 / 6, abs=1e-12)
    assert r["perfect_entangler"] is True
    r = json.loads(run(capsys, "gate-info", "--family", "II", "--param", "pi/2")[1])
    assert r["entangling_power"] == pytest.approx(0, abs=1e-12)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["gate-info", "--family", "III", "--param", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["gate-info", "--family", "I", "--param", "abc"])
    assert e.value.code == 2
    code, _, err = run(capsys, "sweep", "--family", "I", "--count", "1")
    assert code == 2 and "count" in err
    code, _, _ = run(capsys, "sweep", "--family", "I", "--realizations", "three_rzz")
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--family", "I", "--stop", "4")
    assert code == 2


def test_verify_pass_and_negative_control(capsys):
    code, out, _ = run(capsys, "verify")
    r = json.loads(out)
    assert code == 0 and r["failed"] == []
    assert all("residual" in c for c in r["checks"])
    assert all(c["residual"] <= 1e-10 for c in r["checks"])
    code, out, err = run(capsys, "verify", "--inject-wrong")
    assert code == 1
    assert "template:r1_two_cnot" in json.loads(out)["failed"]
    assert "template:r1_two_cnot" in err


def test_verify_tolerance_flag(capsys):
    code, _, _ = run(capsys, "--tol", "1e-30", "verify")
    assert code == 1


def test_ybe_command(capsys):
    r = json.loads(run(capsys, "ybe", "--family", "I", "--p1", "0.3", "--p2", "0.8")[1])
    assert r["exact_residual"] <= 1e-10 and r["phase_free_residual"] <= 1e-10
    r = json.loads(run(capsys, "ybe", "--family", "II", "--p1", "pi/4", "--p2", "pi/4")[1])
    assert r["p3"] == pytest.approx(math.atan(2), abs=1e-12)
    r = json.loads(run(capsys, "ybe", "--family", "II", "--p1", "0.3", "--p2", "0.5", "--noise")[1])
    assert r["F_Yl_Yr"] == pytest.approx(1, abs=1e-8)
    assert r["F_Yl_ideal"] < 1 and r["F_Yr_ideal"] < 1


def test_ybe_command_shots(capsys):
    r = json.loads(run(capsys, "ybe", "--family", "I", "--p1", "0.3", "--p2", "0.5", "--noise",
                       "--shots", "4096")[1])
    exact = json.loads(run(capsys, "ybe", "--family", "I", "--p1", "0.3", "--p2", "0.5", "--noise")[1])
    assert r["mode"] == "shots"
    assert 0 < r["F_Yl_Yr"] <= 1 and 0 < r["F_Yl_ideal"] <= 1
    assert abs(r["F_Yl_ideal"] - exact["F_Yl_ideal"]) < 0.02


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_family_one(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "I", "--count", "7")
    rows = _csv(out)
    assert code == 0
    assert list(rows[0]) == cli.SWEEP_HEADER
    assert len(rows) == 7 * 3
    params = [float(r["param_rad"]) for r in rows]
    assert params == sorted(params)
    by = {}
    for r in rows:
        by.setdefault(r["param_rad"], {})[r["realization"]] = r
    for d in by.values():
        assert float(d["direct_pulse"]["f_avg"]) >= float(d["two_cnot"]["f_avg"])
        assert float(d["two_cnot"]["error_reduction_vs_cnot"]) == 0
    assert len({d["two_cnot"]["duration_dt"] for d in by.values()}) == 1


def test_sweep_family_two_gap_vanishes(capsys):
    rows = _csv(run(capsys, "sweep", "--family", "II", "--count", "5", "--realizations",
                    "three_cnot,direct_pulse")[1])
    last = [r for r in rows if float(r["param_rad"]) == pytest.approx(PI / 2)]
    f = {r["realization"]: float(r["f_avg"]) for r in last}
    assert f["direct_pulse"] == pytest.approx(f["three_cnot"], abs=1e-12)


def test_sweep_number_format(capsys):
    out = run(capsys, "sweep", "--family", "II", "--count", "3")[1]
    for row in _csv(out):
        for key in ("f_avg", "param_rad"):
            mant = row[key].lstrip("-").split("e")[0].replace(".", "").lstrip("0")
            assert len(mant) <= 12
            assert "," not in row[key]


def test_deterministic_output(capsys, tmp_path):
    args = ["--seed", "5", "sweep", "--family", "I", "--count", "3", "--shots", "256", "--repeats", "1"]
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b
    out = tmp_path / "s.csv"
    cli.main(args + ["--out", str(out)])
    assert out.read_text() == a


def test_sweep_json(capsys):
    r = json.loads(run(capsys, "sweep", "--family", "I", "--count", "2", "--format", "json")[1])
    assert set(r[0]) == set(cli.SWEEP_HEADER)


def test_tomography_command(capsys):
    out = run(capsys, "tomography", "--family", "I", "--param", "0.4", "--format", "csv")[1]
    lines = out.strip().split("\n")
    assert lines[0] == "prep,meas,bitstring,probability_or_count,mode,seed"
    assert len(lines) == 1 + 144 * 4
    r = json.loads(run(capsys, "tomography", "--family", "II", "--param", "0.4", "--shots", "2048")[1])
    assert r["n_records"] == 144
    assert r["f_avg_estimate"] == pytest.approx(r["f_avg_true"], abs=0.03)


def test_pulse_duration_command(capsys, tmp_path):
    r = json.loads(run(capsys, "pulse-duration", "--family", "I", "--param", "pi/4")[1])
    assert r["cnot_dt"] == 2048
    assert r["durations_dt"]["direct_pulse"] / r["durations_dt"]["two_cnot"] < 0.5
    s = json.loads(run(capsys, "pulse-duration", "--family", "II", "--param", "0.5",
                       "--realization", "direct_pulse")[1])
    assert set(s) == {"channels", "total_duration"}
    cfg = tmp_path / "base.cfg"
    cfg.write_text("# shorter flat top\ncr_width = 200\n")
    r = json.loads(run(capsys, "pulse-duration", "--family", "I", "--param", "pi/4", "--config", str(cfg))[1])
    assert r["cnot_dt"] == 2 * 456 + 640
    r = json.loads(run(capsys, "pulse-duration", "--family", "I", "--param", "pi/4", "--config", str(cfg),
                       "--set", "cr_width=100")[1])
    assert r["cnot_dt"] == 2 * 356 + 640


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("cr_width\n")
    assert run(capsys, "pulse-duration", "--family", "I", "--param", "1", "--config", str(cfg))[0] == 2
    assert run(capsys, "pulse-duration", "--family", "I", "--param", "1", "--config", "/nonexistent")[0] == 2
    assert run(capsys, "pulse-duration", "--family", "I", "--param", "1", "--set", "cr_amp=5")[0] == 2


def test_decompose_command(capsys):
    r = json.loads(run(capsys, "decompose", "--family", "II", "--param", "0.7")[1])
    assert {d["realization"] for d in r["decompositions"]} == {"three_cnot", "three_rzz", "direct_pulse"}
    assert all(d["residual"] <= 1e-10 for d in r["decompositions"])
    out = run(capsys, "decompose", "--family", "I", "--param", "0.7", "--format", "csv")[1]
    assert out.startswith("realization,n_ops,n_cnot,residual")


def test_module_entry_point():
    import subprocess
    import sys
    p = subprocess.run([sys.executable, "-m", "ybgate", "gate-info", "--family", "2", "--param", "pi/4"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["family"] == "II"


def test_ybe_noise_placement(capsys):
    r = json.loads(run(capsys, "ybe", "--family", "I", "--p1", "0.3", "--p2", "0.5", "--noise",
                       "--noise-placement", "per_gate")[1])
    assert r["noise_placement"] == "per_gate"
    assert r["F_Yl_Yr"] < 1 - 1e-4
