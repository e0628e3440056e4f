import csv
import io
import json
import os
import shutil
import subprocess
import sys

import pytest

from painleve_blocks.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trivial_block(capsys):
    code, out, _ = run(capsys, "block", "--c", "1", "--delta", "1/3", "--order", "0")
    obj = json.loads(out)
    assert code == 0
    assert obj["series"] == "z^{1/3}"
    assert [c for _, c in obj["coeffs"]] == ["1"]


def test_rationals_are_strings(capsys):
    _, out, _ = run(capsys, "block", "--c", "1/2", "--delta", "1/3", "--order", "2")
    obj = json.loads(out)
    assert obj["coeffs"][2] == ["1", "3/2"]
    assert all(isinstance(v, str) for pair in obj["coeffs"] for v in pair)


def test_block_csv(capsys):
    _, out, _ = run(capsys, "block", "--c", "1/2", "--delta", "1/3", "--order", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["step", "coefficient"]
    assert rows[2] == ["1", "3/2"]


def test_nsr_block_reports_delta(capsys):
    code, out, _ = run(capsys, "nsr-block", "--sector", "ns", "--cnsr", "3/2", "--p", "1/3", "--order", "2")
    assert code == 0 and "delta" in json.loads(out)


def test_ln_values(capsys):
    code, out, _ = run(capsys, "ln", "--b", "2", "--p", "3/7", "--sector", "ns", "--n=1/2,1")
    vals = json.loads(out)["values"]
    assert code == 0 and [v["n"] for v in vals] == ["1/2", "1"]


def test_verify_blockquarter_example(capsys):
    code, out, err = run(capsys, "verify", "blockquarter", "--sign", "+", "--order", "10")
    obj = json.loads(out)
    assert code == 0 and obj["ok"] is True and obj["check"] == "blockquarter"
    assert err.startswith("PASS")


def test_verify_blowup_r_example(capsys):
    code, out, _ = run(capsys, "verify", "blowup-r", "--b", "2", "--p", "3/7", "--order", "10", "--quiet")
    obj = json.loads(out)
    assert code == 0 and obj["ok"] is True and obj["residual_exponents"] == []


def test_verify_tau3(capsys):
    code, _, _ = run(capsys, "verify", "tau3", "--sigma", "3/10", "--stilde", "1", "--order", "4", "--quiet")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ("verify", "blockquarter", "--sign", "x"),
    ("block", "--c", "1", "--delta", "1/3"),
    ("tau", "--sigma", "1/2", "--stilde", "1", "--order", "2"),
    ("nosuch",),
    ("suite", "unknown-suite"),
])
def test_usage_and_precondition_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error")


def test_injected_fault_is_localized(capsys):
    code, out, _ = run(capsys, "suite", "--criteria", "5,6", "--inject-fault", "l2-sign", "--quiet")
    rows = json.loads(out)["rows"]
    assert code == 1
    failed = {r["label"] for r in rows if not r["ok"]}
    assert failed and all(lbl.startswith(("blowup-ns", "hatf-ns")) for lbl in failed)
    assert all(r["ok"] for r in rows if r["criterion"] == 5)
    bad = [r for r in rows if not r["ok"]][0]
    assert bad["report"]["residual_exponents"]


def test_ode_dump(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "ode", "algebraic", "--sign", "-", "--dump", str(path), "--quiet")
    assert code == 0 and json.loads(out)["ok"] is True
    header = path.read_text().splitlines()[0]
    assert header.startswith("z")


def _run_script(extra_env, *argv):
    exe = shutil.which("pb")
    cmd = [exe] if exe else [sys.executable, "-m", "painleve_blocks.cli"]
    env = dict(os.environ, **extra_env)
    return subprocess.run(cmd + list(argv), capture_output=True, text=True, env=env, timeout=600)


def test_thread_count_does_not_change_results():
    args = ("suite", "--criteria", "2,6,9", "--no-timing", "--quiet")
    one = _run_script({"PB_THREADS": "1"}, *args)
    four = _run_script({"PB_THREADS": "4"}, *args)
    assert one.returncode == four.returncode == 0
    assert one.stdout == four.stdout
