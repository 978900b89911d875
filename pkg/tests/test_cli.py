import json
import subprocess
import sys

import pytest

from reflexmod.cli import main
from reflexmod.docs import parse_workspace
from reflexmod.suite import CHECKS, run_suite

from conftest import ROOT, WORKSPACES

GOLDEN = ROOT / "tests" / "golden"


def run(*args):
    return subprocess.run([sys.executable, "-m", "reflexmod", *args], capture_output=True, text=True)


def test_validate_ok():
    res = run("validate", str(WORKSPACES / "l2.json"))
    assert res.returncode == 0
    assert res.stdout.startswith("ok: field Q, dim 2, 3 carrier elements")


def test_validate_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "lattice": {"carrier": ["0", "x"]}}))
    res = run("validate", str(bad))
    assert res.returncode == 2
    assert "lattice.carrier[1]" in res.stderr


def test_missing_file_and_unknown_check():
    assert run("validate", "/nonexistent.json").returncode == 2
    assert run("check", "no-such-check", str(WORKSPACES / "l2.json")).returncode == 2


def test_golden_records_are_byte_exact():
    res = run("suite", str(WORKSPACES / "l2.json"), "--checks", "alg,lat-rankone", "--format", "record")
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "l2_alg_rankone.json").read_text()
    res = run("alg", str(WORKSPACES / "m3.json"), "--format", "record")
    assert res.stdout == (GOLDEN / "m3_alg.json").read_text()


def test_m3_audit_reports_counterexample():
    res = run("audit", str(WORKSPACES / "m3.json"), "--format", "record")
    assert res.returncode == 0
    rec = json.loads(res.stdout)[0]
    assert rec["verdict"] is False
    assert rec["audit"]["verdict"] == "counterexample" and len(rec["audit"]["counterexample"]) == 2
    assert "warning" in res.stderr


@pytest.mark.parametrize("name", ["l2", "n3", "b2", "trivial", "qi"])
def test_full_suite_passes_on_goldens(name):
    res = run("suite", str(WORKSPACES / f"{name}.json"))
    assert res.returncode == 0, res.stderr
    assert "consistency=violation" not in res.stdout


def test_n3_named_checks():
    ws = parse_workspace(json.loads((WORKSPACES / "n3.json").read_text()))
    reports = run_suite(ws, ["lat-determined", "complete-distributivity"])
    assert [r.verdict for r in reports] == [True, True]
    assert run_suite(ws, []) == []
    with pytest.raises(KeyError):
        run_suite(ws, ["nope"])


def test_violation_exit_code(tmp_path):
    # phi(H) = <e1> on {0, H}: the rank-one criterion and direct membership disagree
    d = {"dim": 2, "subspaces": {"e1": [["1", "0"]]}, "lattice": {"carrier": ["0", "H"]},
         "homs": {"phi": {"0": "0", "H": "e1"}}}
    p = tmp_path / "gap.json"
    p.write_text(json.dumps(d))
    for seed in range(20):
        res = run("check", "rankone-membership", str(p), "--seed", str(seed), "--samples", "40")
        if res.returncode == 1:
            assert "outside the carrier" in res.stderr
            break
    else:
        pytest.fail("no sampled pair exposed the disagreement")


def test_random_is_reproducible(tmp_path):
    out = tmp_path / "r.json"
    a = run("random", "--dim", "3", "--size", "5", "--seed", "7")
    assert main(["random", "--dim", "3", "--size", "5", "--seed", "7", "--out", str(out)]) == 0
    assert a.stdout == out.read_text()
    assert run("validate", str(out)).returncode == 0
    assert run("random", "--dim", "9").returncode == 2


def test_reports_are_reproducible():
    args = ("suite", str(WORKSPACES / "n3.json"), "--format", "record", "--trials", "50")
    assert run(*args).stdout == run(*args).stdout
    rec = json.loads(run(*args, "--runtime").stdout)
    assert all("runtime" in r for r in rec) and len(rec) == len(CHECKS)


def test_text_output_lists_tables():
    res = run("maps", str(WORKSPACES / "l2.json"))
    assert "-- hom:ideal" in res.stdout
    assert "E_minus" in res.stdout


def test_field_override(tmp_path):
    res = run("validate", str(WORKSPACES / "qi.json"), "--field", "Q")
    assert res.returncode == 2
