"""CLI behaviour and golden-file comparisons.

Set ``INTREARRANGE_REGEN_GOLDEN=1`` to rewrite the expected outputs.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from intrearrange.cli import RunConfig, main, run
from intrearrange.dist import dist_from_json
from intrearrange.errors import ValidationError
from intrearrange.rearrange import is_plus_form

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("INTREARRANGE_REGEN_GOLDEN") == "1"


def g(name):
    return str(GOLDEN / name)


GOLDEN_CASES = {
    "rearrange": ["rearrange", "--in", g("three_atoms.json")],
    "dispersion_square": ["dispersion", "--in", g("uniform03.json"), "--f", "square"],
    "dispersion_identity": ["dispersion", "--in", g("llt.json"), "--f", "identity"],
    "dispersion_power": ["dispersion", "--in", g("uniform03.json"), "--f", "power:3"],
    "check_square": ["check", "--in", g("uniform03.json"), "--f", "square"],
    "check_plus_form": ["check", "--in", g("plus3.json"), "--f", "square"],
    "proof_chain": ["proof-chain", "--in", g("uniform03.json"), "--f", "square"],
    "proof_chain_a": ["proof-chain", "--in", g("llt.json"), "--f", "identity", "--a", "-1/3"],
    "oracle": ["oracle", "--probs", '["2/3","1/3"]', "--window", "-1:1", "--f", "square"],
    "convolve": ["convolve", "--in", g("coin.json"), "--with", g("coin.json")],
    "self_convolve": ["convolve", "--in", g("llt.json"), "--n", "3"],
    "concentration": ["concentration", "--in", g("llt.json"), "--n", "2"],
    "compare": ["compare", "--in", g("uniform03.json"), "--n", "3", "--signs", "search"],
    "compare_all_plus": ["compare", "--in", g("uniform03.json"), "--n", "3", "--signs", "all-plus"],
    "llt_scan": ["llt-scan", "--in", g("llt.json"), "--ns", "1,16,64,256"],
    "sweep": ["sweep", "--seed", "42", "--count", "100", "--f", "square"],
    "sweep_identity": ["sweep", "--seed", "7", "--count", "30", "--f", "identity"],
    "sweep_empty": ["sweep", "--seed", "42", "--count", "0"],
}


def invoke(argv, capsys):
    status = main(argv)
    out, err = capsys.readouterr()
    return status, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, capsys):
    status, out, err = invoke(GOLDEN_CASES[name], capsys)
    assert status == 0, err
    ext = ".csv" if name == "llt_scan" else ".json"
    path = GOLDEN / f"expected_{name}{ext}"
    if REGEN:
        path.write_text(out, encoding="utf-8", newline="\n")
    assert out == path.read_text(encoding="utf-8")


def test_rearrange_values(capsys):
    _, out, _ = invoke(GOLDEN_CASES["rearrange"], capsys)
    assert json.loads(out) == {"atoms": [{"x": -1, "p": "1/4"}, {"x": 0, "p": "1/2"}, {"x": 1, "p": "1/4"}]}


def test_rearrange_round_trip(tmp_path, capsys):
    _, out, _ = invoke(GOLDEN_CASES["rearrange"], capsys)
    d = dist_from_json(out)
    assert is_plus_form(d)
    p = tmp_path / "plus.json"
    p.write_text(out)
    _, again, _ = invoke(["rearrange", "--in", str(p)], capsys)
    assert again == out


def test_dispersion_values(capsys):
    _, out, _ = invoke(GOLDEN_CASES["dispersion_square"], capsys)
    obj = json.loads(out)
    assert obj["value"] == "9/4" and obj["minimizer"] == "3/2"


def test_oracle_values(capsys):
    _, out, _ = invoke(GOLDEN_CASES["oracle"], capsys)
    obj = json.loads(out)
    assert obj["min_value"] == "2/9"
    assert obj["theorem_holds"] and obj["equality_cases_all_equivalent"]


def test_llt_csv(capsys):
    _, out, _ = invoke(GOLDEN_CASES["llt_scan"], capsys)
    lines = out.split("\n")
    assert lines[0] == "n,q_n,ratio"
    assert "\r" not in out
    assert [ln.split(",")[0] for ln in lines[1:-1]] == ["1", "16", "64", "256"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    status, out, _ = invoke(GOLDEN_CASES["llt_scan"] + ["--out", str(target)], capsys)
    assert status == 0 and out == ""
    assert target.read_text() == (GOLDEN / "expected_llt_scan.csv").read_text()


def test_sweep_deterministic(capsys):
    _, a, _ = invoke(GOLDEN_CASES["sweep"], capsys)
    _, b, _ = invoke(GOLDEN_CASES["sweep"], capsys)
    assert a == b
    obj = json.loads(a)
    assert obj["passed"] == 100 and obj["failures"] == []


def test_sweep_power_skips_oracle(capsys):
    status, out, _ = invoke(["sweep", "--seed", "3", "--count", "10", "--f", "power:3"], capsys)
    obj = json.loads(out)
    assert status == 0 and obj["passed"] == 10 and obj["oracle_checks"] == 0


@pytest.mark.parametrize("argv, status, code", [
    (["rearrange", "--in", g("float_probs.json")], 1, "parse_error"),
    (["rearrange"], 1, "validation"),
    (["rearrange", "--in", g("missing.json")], 1, "validation"),
    (["dispersion", "--in", g("coin.json"), "--f", "cube"], 1, "parse_error"),
    (["oracle", "--probs", '["1/2", "1/3"]', "--window", "0:3"], 1, "bad_mass"),
    (["oracle", "--probs", "[0.5, 0.5]", "--window", "0:3"], 1, "parse_error"),
    (["oracle", "--probs", '["1/2","1/2"]', "--window", "0:0"], 1, "bad_window"),
    (["oracle", "--probs", '["1/2","1/2"]', "--window", "zero"], 1, "parse_error"),
    (["oracle", "--probs", json.dumps(["1/10"] * 10), "--window", "0:29"], 2, "too_large"),
    (["oracle", "--probs", '["1/2","1/2"]', "--window", "0:9", "--budget", "5"], 2, "too_large"),
    (["oracle", "--probs", '["1"]', "--window", "0:0", "--f", "power:3"], 1, "validation"),
    (["convolve", "--in", g("llt.json"), "--n", "100", "--budget-bits", "64"], 2, "exact_too_large"),
    (["compare", "--in", g("coin.json"), "--n", "6", "--budget-signs", "32"], 2, "too_many_patterns"),
    (["llt-scan", "--in", g("uniform02.json"), "--ns", "16"], 1, "degenerate_lattice"),
    (["sweep", "--count", "-1"], 1, "validation"),
    (["sweep", "--seed", "-5"], 1, "validation"),
])
def test_error_codes(argv, status, code, capsys):
    got, out, err = invoke(argv, capsys)
    assert got == status
    assert out == ""
    assert json.loads(err)["error"] == code


def test_run_returns_report():
    status, text = run(RunConfig("oracle", probs='["1"]', window="0:0", f_name="identity"))
    assert status == 0 and json.loads(text)["min_value"] == "0"


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig("explode")
    with pytest.raises(ValidationError):
        RunConfig("sweep", budget_enum=0)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "intrearrange", "rearrange", "--in", g("three_atoms.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "expected_rearrange.json").read_text()
