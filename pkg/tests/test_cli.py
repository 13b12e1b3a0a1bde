from __future__ import annotations

import json
import subprocess
import sys

import pytest

from teichfuchs.cli import ledger_append, main, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prototypes_json(capsys):
    code, out, _ = call(capsys, "prototypes", "--D", "17", "--json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 6
    assert {p["spin"] for p in data["prototypes"]} == {0, 1}


def test_prototypes_empty_locus(capsys):
    code, _, err = call(capsys, "prototypes", "--D", "4")
    assert code == 1 and "W_D empty for D <= 4" in err


def test_series_prefix(capsys):
    code, out, _ = call(capsys, "series", "--D", "17", "--eps", "1", "--form", "1", "--N", "3", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["prefix"][1:] == ["(81-15*sqrt(17))/16", "(4845-1155*sqrt(17))/64",
                                  "(3200225-775495*sqrt(17))/2048"]


def test_pf_d17(capsys):
    code, out, _ = call(capsys, "pf", "--D", "17", "--form", "2", "--verify-printed", "--json")
    assert code == 0
    assert json.loads(out)


def test_pf_mismatch_is_a_check_failure(capsys):
    # the tabulated second operator for D=13 is inconsistent with the reduction
    code, _, err = call(capsys, "pf", "--D", "13", "--form", "2", "--verify-printed", "--json")
    assert code == 1 and "differs" in err


def test_charp(capsys):
    code, out, _ = call(capsys, "charp", "--D", "17", "--p", "5", "--n", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["degrees"]["attained"]


def test_unsupported_family(capsys):
    code, _, _ = call(capsys, "family", "--D", "21")
    assert code == 1


@pytest.mark.parametrize("argv", [["bogus"], ["family", "--D", "17", "--wat", "3"], ["series"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_scan_writes_ledger(tmp_path, capsys):
    led = tmp_path / "scan.jsonl"
    code, out, _ = call(capsys, "nilpotence-scan", "--D", "17", "--pmax", "13", "--json",
                        "--ledger", str(led))
    assert code == 0
    lines = out.strip().splitlines()
    recs = [json.loads(x) for x in led.read_text().splitlines()]
    assert len(lines) == len(recs) == 5
    assert [r["p"] for r in recs] == [3, 5, 7, 11, 13]
    assert all(r["verdict"] and r["check"] == "nilpotence" and "timestamp" in r for r in recs)


def test_empty_scan(tmp_path, capsys):
    led = tmp_path / "empty.jsonl"
    code, out, _ = call(capsys, "nilpotence-scan", "--D", "17", "--pmax", "2", "--ledger", str(led))
    assert code == 0
    assert not led.exists() or led.read_text() == ""


def test_ledger_env(tmp_path, monkeypatch):
    led = tmp_path / "env.jsonl"
    monkeypatch.setenv("TEICHFUCHS_LEDGER", str(led))
    ledger_append({"D": 17, "eps": 1, "p": 7, "n": 1, "check": "nilpotence", "verdict": True})
    ledger_append({"D": 17, "eps": 1, "p": 7, "n": 1, "check": "nilpotence", "verdict": True})
    recs = [json.loads(x) for x in led.read_text().splitlines()]
    assert len(recs) == 2
    assert set(recs[0]) == {"D", "eps", "p", "n", "check", "verdict", "timestamp"}


def test_unwritable_ledger(tmp_path, capsys):
    with pytest.raises(OSError):
        ledger_append({"D": 17}, str(tmp_path / "missing" / "x.jsonl"))
    code, _, _ = call(capsys, "nilpotence-scan", "--D", "17", "--pmax", "5",
                      "--ledger", str(tmp_path / "missing" / "x.jsonl"))
    assert code == 1


def test_reproduce_is_deterministic():
    cmd = [sys.executable, "-m", "teichfuchs", "reproduce", "--D", "17", "--eps", "1", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    data = json.loads(a.stdout)
    assert data["passed"] and all(data["checks"].values())


def test_reproduce_conjugate_model(capsys):
    code, out, _ = call(capsys, "reproduce", "--D", "17", "--eps", "0", "--json")
    assert code == 0 and json.loads(out)["passed"]
