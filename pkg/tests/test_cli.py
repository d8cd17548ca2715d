import json
import subprocess
import sys

import pytest

from helpers import PROGRAMS

from defcheck import cli

REACH = str(PROGRAMS / "reach.lpd")
REACH_MODEL = str(PROGRAMS / "reach_model.fos")
REACH_GRAPH = str(PROGRAMS / "reach_graph.fos")
FAMILY = str(PROGRAMS / "family.lpd")
KEYS = {"command", "inputs", "flags", "verdict", "exactness", "exit_code", "warnings", "digest", "timing"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_check_text_output(capsys):
    code, out, _ = run(capsys, "check", REACH, REACH_MODEL)
    assert code == 0
    assert out.splitlines() == ["H(CF): n/a (bare definition)", "D: true", "model: true", "exactness: exact"]


def test_check_json_report(capsys, tmp_path):
    code, report, _ = run_json(capsys, "check", FAMILY, str(PROGRAMS / "family_lhm.fos"))
    assert code == 0
    assert set(report) == KEYS
    assert report["verdict"]["modules"] == {"child_of": True, "sibling": True}
    assert [i["path"] for i in report["inputs"]] == [FAMILY, str(PROGRAMS / "family_lhm.fos")]
    assert all(len(i["sha256"]) == 64 for i in report["inputs"])


def test_check_failure_names_the_module(capsys, tmp_path):
    text = (PROGRAMS / "family_lhm.fos").read_text().replace("(jonah,tessa), ", "")
    path = tmp_path / "m.fos"
    path.write_text(text)
    code, report, _ = run_json(capsys, "check", FAMILY, str(path))
    assert code == 1
    assert report["verdict"]["failed"] == ["D", "module sibling"]


def test_reports_are_deterministic(capsys):
    _, a, _ = run_json(capsys, "eval", REACH, REACH_GRAPH)
    _, b, _ = run_json(capsys, "eval", REACH, REACH_GRAPH)
    assert a["digest"] == b["digest"]
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.lpd"
    bad.write_text("p(X) :- q(X)")
    code, report, err = run_json(capsys, "eval", str(bad), REACH_GRAPH)
    assert code == 2
    assert report["error"]["type"] == "ParseError"
    assert "bad.lpd:1:13" in err
    code, _, err = run(capsys, "eval", str(tmp_path / "missing.lpd"))
    assert code == 2 and err.startswith("error: FileNotFoundError")


def test_not_stratified_reports_the_cycle(capsys):
    code, report, _ = run_json(capsys, "eval", str(PROGRAMS / "liar.lpd"), REACH_GRAPH)
    assert code == 2
    assert report["error"]["type"] == "NotStratified"
    assert report["error"]["cycle"] == [["p", "p", "-"]]


def test_truncation_warning(capsys, tmp_path):
    prog = tmp_path / "up.lpd"
    prog.write_text("#universe constructors: 0, s/1.\nsmall(X) :- big(s(X)).\nbig(s(s(0))).\n")
    code, out, err = run(capsys, "lhm", str(prog), "--depth", "1")
    assert code == 0
    assert "exactness: truncated" in out
    assert "warning: result is truncated:" in err


def test_query(capsys):
    member = str(PROGRAMS / "member.lpd")
    assert run(capsys, "query", member, "member(3,[1,2,3])")[0] == 0
    assert run(capsys, "query", member, "member(0,[1,2,3])")[0] == 1
    assert run(capsys, "query", member, "member(X,[1])")[0] == 2


def test_trace_and_lhm(capsys):
    code, report, _ = run_json(capsys, "trace", REACH, REACH_GRAPH)
    assert code == 0
    code, report, _ = run_json(capsys, "lhm", FAMILY)
    assert code == 0
    assert "sibling(jonah,tessa)" in report["verdict"]["facts"]


def test_split(capsys):
    code, report, _ = run_json(capsys, "split", FAMILY, str(PROGRAMS / "family_lhm.fos"))
    assert code == 0
    assert run(capsys, "split", REACH, REACH_GRAPH)[0] == 2


def test_completion_exit_codes(capsys):
    assert run(capsys, "completion", REACH, REACH_GRAPH)[0] == 1
    assert run(capsys, "completion", FAMILY, str(PROGRAMS / "family_lhm.fos"))[0] == 0


def test_oracle_budget_flag_and_environment(capsys, monkeypatch):
    assert run(capsys, "oracle", "min-check", REACH, REACH_MODEL)[0] == 0
    code, report, _ = run_json(capsys, "oracle", "min-check", REACH, REACH_MODEL, "--budget", "8")
    assert code == 2 and report["error"]["type"] == "BudgetExceeded"
    monkeypatch.setenv("DEFCHECK_BUDGET", "8")
    assert run(capsys, "oracle", "min-check", REACH, REACH_MODEL)[0] == 2
    # the flag wins over the environment
    assert run(capsys, "oracle", "min-check", REACH, REACH_MODEL, "--budget", "1024")[0] == 0


def test_module_flag(capsys):
    code, out, _ = run(capsys, "eval", FAMILY, "--module", "child_of")
    assert code == 0 and "sibling" not in out
    assert run(capsys, "eval", FAMILY, "--module", "nope")[0] == 2


def test_python_m_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "defcheck", "check", REACH, REACH_MODEL],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "model: true" in proc.stdout


def test_usage_error_is_argparse_exit():
    with pytest.raises(SystemExit) as err:
        cli.main(["frobnicate"])
    assert err.value.code == 2
