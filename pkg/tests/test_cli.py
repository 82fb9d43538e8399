import csv
import io
import json
import subprocess
import sys

import pytest

from nestorders.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_problem2_with_oracle(capsys):
    code, out, _ = run(capsys, "--format", "json", "no", "6: 12,23,34,35,56,123,235,356,2356", "--oracle")
    data = json.loads(out)
    assert code == 0
    assert data["no"] == 1 and data["direct"] == 1 and data["agree"]


def test_no_examples(capsys):
    assert "= 2" in run(capsys, "no", "3: 1,2,3,12,13,23,123,0")[1]
    assert "= -1" in run(capsys, "no", "2: 12")[1]


def test_no_witness_trace_and_nested(capsys):
    code, out, _ = run(capsys, "--format", "json", "--witness", "--oracle", "no", "3: 1,2,3,12,13,23,123,0")
    data = json.loads(out)
    assert len(data["trace"]) == 2
    assert data["nested_orders"]["n"] == 2
    assert data["witness_revalidated"] is True


def test_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "no", "2: 12", "--format", "json")
    assert json.loads(out)["no"] == -1


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "no", "3: 1x")
    assert code == 2 and "position" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_resource_guard_exit_3(capsys):
    code, _, err = run(capsys, "sweep", "6")
    assert code == 3 and "resource guard" in err


def test_bracket(capsys):
    code, out, _ = run(capsys, "--format", "json", "bracket", "problem2")
    data = json.loads(out)
    assert code == 0
    assert data["fr_lower"] == 1 and data["fr_upper"] == 2 and data["status"] == "gap"
    code, out, _ = run(capsys, "--format", "json", "--witness", "bracket", "problem2")
    assert json.loads(out)["certificates"][0]["witness"]["orders"]


def test_classify4(capsys):
    code, out, _ = run(capsys, "--format", "json", "classify4", "4: 12,23,13")
    data = json.loads(out)
    assert data["label"] == 2 and data["agree"] and not data["closed"]
    assert run(capsys, "classify4", "3: 12")[0] == 2


def test_fprec(capsys):
    code, out, _ = run(capsys, "--format", "json", "fprec", "1234")
    data = json.loads(out)
    assert data["m"] == 5 and data["onemin_pivot"] == 1 and data["size"] == 16
    code, out, _ = run(capsys, "--format", "csv", "fprec", "53241")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["set"] and len(rows) == 23
    assert run(capsys, "fprec", "1224")[0] == 2


def test_orders_search(capsys):
    code, out, _ = run(capsys, "--format", "json", "orders-search", "4: 12,23,34,123,234", "-k", "2")
    assert json.loads(out)["orders"] is not None
    code, out, _ = run(capsys, "--format", "json", "orders-search", "4: 12,13,14,123,124",
                       "--orders", "1423", "1324")
    assert json.loads(out)["orders"] == ["1423", "1324"]


def test_sweep_formats(capsys, tmp_path):
    target = tmp_path / "rep.json"
    code, out, _ = run(capsys, "--format", "csv", "sweep", "2", "--out", str(target))
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 17
    assert json.loads(target.read_text())["aggregates"]["records"] == 16
    code, out, _ = run(capsys, "sweep", "2")
    assert "| no | families |" in out


def test_verify_single_case(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "noall")
    data = json.loads(out)
    assert code == 0 and data["cases"][0]["status"] == "pass"


def test_verify_failing_case_exit_1(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "fprec")
    data = json.loads(out)
    assert code == 1
    assert data["cases"][0]["witness"]["printed"]


def test_verify_unknown_case(capsys):
    assert run(capsys, "verify", "nope")[0] == 2


def test_explore_md(capsys):
    code, out, _ = run(capsys, "explore", "2")
    assert code == 0 and "bracket: [1, 2]" in out


def test_cache_cycle(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("NESTORDERS_CACHE", raising=False)
    path = str(tmp_path / "memo.jsonl")
    run(capsys, "--cache", path, "sweep", "3", "--no-brackets")
    code, out, _ = run(capsys, "--format", "json", "--cache", path, "cache", "stats")
    data = json.loads(out)
    assert code == 0 and data["entries"] > 0 and data["exists"]
    code, out, _ = run(capsys, "--format", "json", "--cache", path, "sweep", "3", "--no-brackets")
    assert json.loads(out)["cache"]["expansions"] == 0
    code, out, _ = run(capsys, "--cache", path, "cache", "clear")
    assert code == 0 and "removed" in out
    assert run(capsys, "cache", "stats")[0] == 2


def test_seed_validation(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--seed", str(1 << 64), "verify", "noall"])
    assert info.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "nestorders", "no", "2: 1,2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip().endswith("= 1")
