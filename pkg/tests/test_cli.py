import json
import subprocess
import sys
from pathlib import Path

import pytest

from locality_lab import core
from locality_lab.cli import main

DATA = Path(__file__).parent / "data"
WORKED = str(DATA / "worked_example.cf")
PIGEON = str(DATA / "pigeonhole.cf")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_valid(capsys):
    code, out, _ = run(capsys, "verify", "--in", WORKED)
    assert code == 0 and out.strip() == "valid"


def test_verify_invalid_lists_witness(capsys):
    code, out, _ = run(capsys, "verify", "--in", PIGEON, "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["valid"] is False and doc["violations"] == [[1, 3]]


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--n", "16", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"n": 16, "log_star": 3, "bound": "1/2", "min_rounds": 1}
    code, out, _ = run(capsys, "bound", "--n", "16")
    assert "log*(16) = 3" in out and "1/2" in out and "rounds >= 1" in out


def test_tower_and_logstar(capsys):
    assert run(capsys, "tower", "--i", "3")[1].strip() == "16"
    assert run(capsys, "tower", "--i", "6")[1].strip() == "^6 2"
    assert len(run(capsys, "tower", "--i", "5")[1].strip()) == 19729
    assert run(capsys, "logstar", "--x", "65536")[1].strip() == "4"
    assert run(capsys, "logstar", "--x", "3/2")[1].strip() == "1"
    assert run(capsys, "logstar", "--x", "abc")[0] == 2


def test_speedup_round_trip(capsys, tmp_path):
    out = tmp_path / "g.cf"
    code, _, _ = run(capsys, "speedup", "--in", WORKED, "--out", str(out))
    assert code == 0
    assert out.read_text() == (DATA / "worked_example_speedup.cf").read_text()
    assert run(capsys, "verify", "--in", str(out))[0] == 0
    assert run(capsys, "speedup", "--in", str(out), "--out", str(tmp_path / "h.cf"))[0] == 2


def test_search_and_trace(capsys, tmp_path):
    w = tmp_path / "w.cf"
    rep = tmp_path / "r.json"
    code, _, _ = run(capsys, "search", "--n", "8", "--k", "2", "--witness", str(w), "--json", str(rep))
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["min_colours"] == 3 and doc["derived_lower_bound"] == 3
    assert "wall_time_s" not in doc
    t = tmp_path / "t.json"
    code, _, _ = run(capsys, "trace", "--in", str(w), "--out", str(t))
    assert code == 0
    trace = json.loads(t.read_text())
    assert [(s["arity"], s["colour_count"]) for s in trace["steps"]] == [(2, "3"), (1, "8")]
    assert trace["base_verdict"]["holds"] is True


def test_search_timing_flag(capsys, tmp_path):
    rep = tmp_path / "r.json"
    run(capsys, "search", "--n", "5", "--k", "2", "--json", str(rep), "--timing")
    assert "wall_time_s" in json.loads(rep.read_text())


def test_search_infeasible(capsys):
    assert run(capsys, "search", "--n", "5", "--k", "1", "--cmax", "4")[0] == 1


def test_trace_invalid_and_guard(capsys, tmp_path):
    assert run(capsys, "trace", "--in", PIGEON)[0] == 1
    x = tmp_path / "x.cf"
    assert run(capsys, "extract", "--alg", "builtin:reduction", "--n", "16", "--out", str(x))[0] == 0
    code, out, _ = run(capsys, "trace", "--in", str(x), "--format", "json")
    assert code == 3
    assert json.loads(out)["colour_count"] == "2^256"


def test_guard_env(capsys, monkeypatch):
    monkeypatch.setenv(core.GUARD_ENV, "2")
    assert run(capsys, "verify", "--in", WORKED)[0] == 3
    assert run(capsys, "search", "--n", "5", "--k", "2")[0] == 3


def test_format_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cf"
    bad.write_text("cf-v1 n=3 k=2 c=2\n1 3 -> 1\n1 2 -> 1\n2 3 -> 2\n")
    assert run(capsys, "verify", "--in", str(bad))[0] == 2
    assert run(capsys, "verify", "--in", str(tmp_path / "missing.cf"))[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2


def test_simulate(capsys, tmp_path):
    perm = tmp_path / "p.txt"
    perm.write_text("1\n2\n3\n")
    code, out, _ = run(capsys, "simulate", "--perm", str(perm), "--alg", "builtin:bucket", "--T", "0")
    assert code == 0
    assert json.loads(out) == {"colours": [1, 2, 3], "proper": True, "violations": [], "rounds_used": 0}
    code, out, _ = run(capsys, "simulate", "--perm", "random:4", "--n", "9", "--alg", "builtin:constant")
    assert code == 1 and len(json.loads(out)["violations"]) == 9
    code, out, _ = run(capsys, "simulate", "--perm", "random:4", "--n", "100", "--alg", "builtin:reduction")
    assert code == 0 and json.loads(out)["proper"]
    assert run(capsys, "simulate", "--perm", "random", "--alg", "builtin:bucket")[0] == 2


def test_simulate_with_table(capsys, tmp_path):
    f = core.ColouringFunction.from_rule(4, 1, 3, lambda t: (t[0] - 1) % 3 + 1)
    core.dump(f, tmp_path / "f.cf")
    perm = tmp_path / "p.txt"
    perm.write_text("1\n2\n3\n4\n")
    code, out, _ = run(capsys, "simulate", "--perm", str(perm), "--alg", str(tmp_path / "f.cf"))
    assert code == 1 and json.loads(out)["colours"] == [1, 2, 3, 1]
    perm.write_text("4\n2\n3\n1\n")
    assert run(capsys, "simulate", "--perm", str(perm), "--alg", str(tmp_path / "f.cf"), "--T", "1")[0] == 2


def test_extract(capsys, tmp_path):
    out = tmp_path / "e.cf"
    code, text, _ = run(capsys, "extract", "--alg", "builtin:bucket", "--n", "3", "--T", "0", "--out", str(out))
    assert code == 0
    assert core.load(out).table == (1, 2, 3)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "locality_lab", "bound", "--n", "65536"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "log*(65536) = 4" in proc.stdout
