import csv
import io
import json
import os
import subprocess
import sys

import pytest

from qfourier.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo_passes(capsys):
    code, out, _ = run(capsys, "demo-s3")
    assert code == 0 and "max deviation" in out


def test_demo_negative_control(capsys):
    code, _, _ = run(capsys, "demo-s3", "--corrupt-coproduct", "2")
    assert code == 1


def test_demo_jsonl_one_object_per_identity(capsys):
    code, out, _ = run(capsys, "demo-s3", "--format", "jsonl")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) > 10
    assert all({"identity", "deviation", "verdict"} <= set(r) for r in rows)


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--group", "S3", "--seed", "42", "--samples", "20")
    assert code == 0 and "0 violations" in out


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "--group", "Z4", "--seed", "3", "--samples", "5", "--format", "csv")
    b = run(capsys, "verify", "--group", "Z4", "--seed", "3", "--samples", "5", "--format", "csv")
    assert a == b and a[0] == 0


def test_flow(capsys):
    code, out, _ = run(capsys, "flow", "--group", "Z6", "--lambda", "0.5", "--seed", "7", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 10
    assert all(r["classification"] in ("Zero", "BiprojectionMultiple") for r in rows)


def test_flow_trajectory(capsys):
    code, out, _ = run(capsys, "flow", "--group", "S3", "--samples", "1", "--trajectory")
    assert code == 0 and out.splitlines()[0] == "iter,norm2,entropy,dist_to_limit"


def test_flow_bad_lambda(capsys):
    code, _, err = run(capsys, "flow", "--lambda", "2")
    assert code == 2 and "lambda" in err


def test_ising_scan_one_flip(capsys):
    code, out, _ = run(capsys, "ising-scan", "--beta-min", "0.05", "--beta-max", "1.2", "--steps", "200")
    rows = list(csv.DictReader(io.StringIO(out)))
    phases = [r["phase"] for r in rows]
    assert code == 0 and len(rows) == 200
    assert sum(a != b for a, b in zip(phases, phases[1:])) == 1


def test_ising_scan_pretty_reports_critical_beta(capsys):
    code, out, _ = run(capsys, "ising-scan", "--steps", "4", "--format", "pretty")
    assert code == 0 and "critical beta" in out


def test_bishift(capsys):
    code, out, _ = run(capsys, "bishift", "--group", "Z4", "--format", "jsonl")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and all(r["certified"] for r in rows)
    assert len(rows) == sum(len(h) * 4 for h in ({0}, {0, 2}, {0, 1, 2, 3}))


def test_bishift_usage_errors(capsys):
    assert run(capsys, "bishift", "--group", "S3")[0] == 2
    assert run(capsys, "bishift", "--group", "Z4", "--subgroup", "9")[0] == 2
    assert run(capsys, "bishift", "--group", "Z4", "--subgroup", "0", "--character", "5")[0] == 2


def test_sumset(capsys):
    code, out, _ = run(capsys, "sumset", "--group", "Q8", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(r["match"] == "True" for r in rows)


def test_unknown_group(capsys):
    code, _, err = run(capsys, "verify", "--group", "Z3xx")
    assert code == 2 and "unknown group" in err


def test_out_file(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "ising-scan", "--steps", "3", "--out", str(path))
    assert code == 0 and out == "" and path.read_text().startswith("beta,")


def test_unwritable_out(tmp_path, capsys):
    code, _, err = run(capsys, "demo-s3", "--out", str(tmp_path / "missing" / "x.txt"))
    assert code == 2 and "cannot write" in err


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=os.path.join(os.path.dirname(__file__), "..", "src"))
    proc = subprocess.run([sys.executable, "-m", "qfourier", "demo-s3", "--format", "csv"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.startswith("identity")


def test_missing_command():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
