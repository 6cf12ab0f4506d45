import io
import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from pddl22.cli import run


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(["validate", *map(str, argv)], stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


SHOP = (FIXTURES / "shop/domain.pddl", FIXTURES / "shop/problem.pddl")


def test_valid_plan_exit_zero():
    code, out, _ = call(*SHOP, FIXTURES / "shop/at10.plan")
    assert code == 0
    assert "status: valid" in out and "makespan: 10" in out


def test_invalid_plan_exit_one():
    code, out, _ = call(*SHOP, FIXTURES / "shop/at8.plan")
    assert code == 1
    assert "precondition-false@8" in out


def test_plan_from_stdin():
    code, out, _ = call(*SHOP, stdin="10: (go-shopping)\n", )
    assert code == 0 and "plan: <stdin>" in out


def test_restriction_three_exit_two():
    case = FIXTURES / "lint/illegal/r3-negated-derived"
    code, out, err = call(case / "domain.pddl", case / "problem.pddl", "--check-only")
    assert code == 2
    assert "restriction 3" in err
    code, out, err = call(case / "domain.pddl", case / "problem.pddl", "--json", stdin="")
    report = json.loads(out)
    assert code == 2 and report["status"] == "error" and report["error"]["restrictions"] == [3]


@pytest.mark.parametrize("case", sorted((FIXTURES / "lint/illegal").iterdir()), ids=lambda p: p.name)
def test_illegal_corpus_exit_two(case):
    code, out, err = call(case / "domain.pddl", case / "problem.pddl", "--check-only", "--json")
    assert code == 2
    assert json.loads(out)["error"]["restrictions"] == [int(case.name[1])]
    assert f"restriction {case.name[1]}" in err


@pytest.mark.parametrize("case", sorted((FIXTURES / "lint/legal").iterdir()), ids=lambda p: p.name)
def test_legal_corpus_check_only(case):
    code, out, _ = call(case / "domain.pddl", case / "problem.pddl", "--check-only")
    assert code == 0 and "status: ok" in out


def test_missing_file():
    code, out, err = call(FIXTURES / "nope.pddl", SHOP[1], "--check-only")
    assert code == 2 and "cannot read" in err


def test_parse_error_in_plan():
    code, out, err = call(*SHOP, stdin="10: (go-fishing)\n")
    assert code == 2 and "unknown action" in err and "line" not in err.split(":", 2)[0]


def test_bad_tolerance():
    with pytest.raises(SystemExit) as exc:
        call(*SHOP, "--tolerance", "-1")
    assert exc.value.code == 2


def test_tolerance_merges_times():
    fly = (FIXTURES / "fly/domain.pddl", FIXTURES / "fly/problem.pddl")
    plan = "3.9: (fly p1 ams lhr) [3]\n"
    code, out, _ = call(*fly, "--json", stdin=plan)
    assert code == 0 and json.loads(out)["happenings"] == 4
    code, out, _ = call(*fly, "--json", "--tolerance", "0.1", stdin=plan)
    # take-off at 3.9 joins the runway opening at 4, which it does not interfere with
    assert code == 0 and json.loads(out)["happenings"] == 3


def test_json_report_schema():
    code, out, _ = call(*SHOP, FIXTURES / "shop/at10.plan", "--json", "--verbose")
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"domain", "problem", "plan", "status", "valid", "failure", "t_end", "makespan",
                           "metric", "happenings", "trace", "timing"}
    assert report["makespan"] == "10" and report["metric"] == {"direction": "minimize", "value": "10"}
    assert [r["time"] for r in report["trace"]] == ["9", "10", "20"]
    assert set(report["timing"]) == {"parse_seconds", "ground_seconds", "validate_seconds"}


def test_json_is_deterministic_apart_from_timing():
    outs = []
    for _ in range(2):
        _, out, _ = call(*SHOP, FIXTURES / "shop/at10.plan", "--json", "--verbose")
        report = json.loads(out)
        report.pop("timing")
        outs.append(json.dumps(report, sort_keys=True))
    assert outs[0] == outs[1]


def test_text_and_json_carry_the_same_facts():
    _, text, _ = call(*SHOP, FIXTURES / "shop/at8.plan")
    _, raw, _ = call(*SHOP, FIXTURES / "shop/at8.plan", "--json")
    report = json.loads(raw)
    f = report["failure"]
    assert f"failure: {f['reason']}@{f['time']}: {f['message']}" in text
    assert f"t_end: {report['t_end']}" in text


def test_verbose_text_trace():
    _, out, _ = call(FIXTURES / "blocks/domain.pddl", FIXTURES / "blocks/problem.pddl",
                     FIXTURES / "blocks/to-table.plan", "--verbose")
    assert "derived_del: (above a b) (above a c)" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pddl22", "validate", *map(str, SHOP), str(FIXTURES / "shop/at10.plan"), "--json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["valid"] is True
