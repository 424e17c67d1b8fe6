import json
import random
import subprocess
import sys

import pytest

from tstarh3 import catalog, liealg, linalg
from tstarh3.cli import main
from tstarh3.scalars import scalar_to_json


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "tstarh3.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_report_family(tmp_path):
    code, out, _ = run_cli(["report", "--family", "S30", "--params", "3,2,1,+"])
    assert code == 0
    rep = json.loads(out)
    assert rep["curvature"]["scalar_curvature"] == "-1/2"
    assert rep["holonomy"]["dimension"] == 15
    assert rep["backend"] == "exact"
    assert rep["descriptor"]["family"] == "S30"


def test_report_flags_ad_invariant():
    code, out, _ = run_cli(["report", "--family", "S00_16a",
                            "--params", "l2=1,l3=1", "--compact"])
    assert code == 0
    rep = json.loads(out)
    assert rep["curvature"]["flags"]["flat"]
    assert rep["distinguished"]["ad_invariant"]


def test_report_metric_file(tmp_path):
    g = catalog.construct("S10_15b", {"m11": 1, "m12": 2, "ssign": 1, "eps": 1})
    f = liealg.random_automorphism(random.Random(3))
    pushed = linalg.congruence(g.entries, f.matrix)
    path = tmp_path / "metric.json"
    path.write_text(json.dumps([[scalar_to_json(x) for x in r] for r in pushed]))
    code, out, _ = run_cli(["report", "--in", str(path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["descriptor"]["family"] == "S10_15b"
    assert rep["curvature"]["flags"]["ricci_flat"]


def test_validation_exit_codes(tmp_path):
    code, out, _ = run_cli(["report", "--family", "S30", "--params", "0,0,0,+"])
    assert code == 2
    assert "error" in json.loads(out)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, _ = run_cli(["report", "--in", str(bad)])
    assert code == 2
    degen = tmp_path / "degen.json"
    degen.write_text(json.dumps([[0] * 6 for _ in range(6)]))
    code, out, _ = run_cli(["report", "--in", str(degen)])
    assert code == 2


def test_report_determinism():
    args = ["report", "--family", "S21_triple", "--params", "s11=2,s13=1,eps=1"]
    _, out1, _ = run_cli(args)
    _, out2, _ = run_cli(args)
    assert out1 == out2


def test_isometric_command(tmp_path):
    code, out, _ = run_cli(["isometric", "S30:3,2,1,+", "S30:l1=3,l2=2,l3=1,eps=1"])
    assert code == 0 and json.loads(out)["isometric"] is True
    code, out, _ = run_cli(["isometric", "S11_11:s11=1,s22=1", "S11_12:s12=1"])
    assert code == 0 and json.loads(out)["isometric"] is False
    # exact and float backends agree on the verdict
    for backend in ("exact", "float"):
        code, out, _ = run_cli(["isometric", "S30:3,2,1,+", "S30:3,2,1,-",
                                "--backend", backend])
        assert code == 0 and json.loads(out)["isometric"] is False


def test_sweep_jsonl_deterministic_order():
    args = ["sweep", "--family", "S30",
            "--params", "l1=3:4,l2=2,l3=1,eps=1", "--jobs", "3"]
    _, out1, _ = run_cli(args)
    _, out2, _ = run_cli(args)
    assert out1 == out2
    lines = [json.loads(line) for line in out1.strip().splitlines()]
    assert [l["input"]["params"]["l1"] for l in lines] == ["3", "4"]
    for l in lines:
        assert l["holonomy"]["dimension"] == 15


def test_sweep_partial_failures_keep_streaming():
    args = ["sweep", "--family", "S21_triple", "--params", "s11=1:0,s13=1,eps=1"]
    code, out, _ = run_cli(args)
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 2
    assert "descriptor" in lines[0]
    assert "error" in lines[1]


def test_families_listing():
    code, out, _ = run_cli(["families"])
    assert code == 0
    listing = json.loads(out)
    assert set(listing) == set(catalog.FAMILIES)
    assert listing["S30"]["parameters"] == ["l1", "l2", "l3"]


def test_main_entry_in_process(capsys):
    assert main(["families", "--compact"]) == 0
    out = capsys.readouterr().out
    assert "S10_15b" in out
