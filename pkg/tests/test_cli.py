import io
import json
import subprocess
import sys

import pytest

from diagram_groups import cli
from diagram_groups.pathology import InvariantViolation

from conftest import presentation_path


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_explore_text():
    code, out, _ = run("explore", "--presentation", presentation_path("commuting"), "--word", "abc")
    assert code == 0
    assert "complete" in out and "b1: 1" in out


def test_explore_json_is_deterministic():
    args = ("explore", "--presentation", presentation_path("commuting"), "--word", "abbc", "--json")
    first, second = run(*args), run(*args)
    assert first == second
    doc = json.loads(first[1])
    assert doc["counts"]["0"] == 12 and doc["betti_1"] == 2


def test_pi1_of_bbcc_is_trivial():
    code, out, _ = run("pi1", "--presentation", presentation_path("commuting"), "--word", "bbcc", "--json")
    assert code == 0
    assert json.loads(out)["simplified"]["trivial"] is True


def test_farley_ball():
    code, out, _ = run("farley-ball", "--presentation", presentation_path("commuting"), "--word", "abc",
                       "--radius", "1", "--json")
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 3


def test_freeness_witness_round_trip(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run("freeness", "--presentation", presentation_path("commuting"), "--word", "aabbcc",
                       "--out", str(target))
    assert code == 0
    assert "NotFree" in out
    code, out, _ = run("verify-witness", str(target))
    assert code == 0 and "all replayed" in out

    doc = json.loads(target.read_text())
    doc["witnesses"][0]["B"] = doc["witnesses"][0]["A"]
    target.write_text(json.dumps(doc))
    code, out, _ = run("verify-witness", str(target))
    assert code == 1 and "FAILED" in out


def test_pathology_witness_round_trip(tmp_path):
    target = tmp_path / "path.json"
    code, out, _ = run("pathology", "--presentation", presentation_path("self_crossing"), "--word", "appa",
                       "--max-words", "300", "--out", str(target))
    assert code == 0
    assert "self-intersecting hyperplane: Proved" in out
    assert run("verify-witness", str(target))[0] == 0


def test_unknown_verdict_exits_zero():
    code, out, _ = run("freeness", "--presentation", presentation_path("absorbing_p"), "--word", "abc")
    assert code == 0
    assert "Unknown" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("explore", "--word", "abc"),
        ("explore", "--presentation", "does-not-exist.txt", "--word", "abc"),
        ("bogus",),
        ("explore", "--presentation", presentation_path("commuting"), "--word", "abd"),
        ("verify-witness",),
        ("explore", "--presentation", presentation_path("commuting"), "--word", "abc", "--max-words", "0"),
    ],
)
def test_usage_errors_exit_one(argv):
    assert run(*argv)[0] == 1


def test_parse_error_reports_line(tmp_path):
    bad = tmp_path / "dup.txt"
    bad.write_text("letters: a b\nrel: ab = ba\nrel: ba = ab\n")
    code, _, err = run("explore", "--presentation", str(bad), "--word", "ab")
    assert code == 1 and "line 3" in err


def test_document_without_witnesses_fails_verification(tmp_path):
    target = tmp_path / "free.json"
    run("freeness", "--presentation", presentation_path("commuting"), "--word", "abc", "--out", str(target))
    assert run("verify-witness", str(target))[0] == 1


def test_invariant_violation_exits_two(monkeypatch):
    def boom(args):
        raise InvariantViolation("synthetic")

    monkeypatch.setitem(cli.HANDLERS, "explore", boom)
    code, _, err = run("explore", "--presentation", presentation_path("commuting"), "--word", "abc")
    assert code == 2 and "synthetic" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "diagram_groups", "explore", "--presentation", presentation_path("commuting"),
         "--word", "abc"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "b1: 1" in proc.stdout
