import json

from conftest import load
from pddl22.executor import trace_lines, trace_records, validate


def test_one_record_per_happening():
    d, p, plan = load("shop/domain.pddl", "shop/problem.pddl", "10: (go-shopping)")
    v = validate(d, p, plan)
    lines = trace_lines(v.trace)
    assert [json.loads(line)["time"] for line in lines] == ["9", "10", "20"]
    first = json.loads(lines[0])
    assert first == {
        "time": "9", "actions": ["(at 9 (shop-open))"], "add": ["(shop-open)"], "del": [],
        "derived_add": [], "derived_del": [], "numeric": {},
    }


def test_derived_deltas():
    d, p, plan = load("blocks/domain.pddl", "blocks/problem.pddl", "blocks/to-table.plan")
    (rec,) = trace_records(validate(d, p, plan).trace)
    assert rec["add"] == ["(clear b)", "(ontable a)"]
    assert rec["del"] == ["(on a b)"]
    assert rec["derived_del"] == ["(above a b)", "(above a c)"]
    assert rec["derived_add"] == []


def test_numeric_changes_are_exact_strings():
    d, p, plan = load("fly/domain.pddl", "fly/problem.pddl", "2: (fly p1 ams lhr) [3]")
    records = list(trace_records(validate(d, p, plan).trace))
    end = next(r for r in records if "(fly p1 ams lhr)@end" in r["actions"])
    assert end["numeric"] == {"(fuel-used)": "3"}
    assert records[0]["actions"] == ["(fly p1 ams lhr)@start"]


def test_lines_are_deterministic():
    d, p, plan = load("fly/domain.pddl", "fly/problem.pddl", "2: (fly p1 ams lhr) [3]")
    assert trace_lines(validate(d, p, plan).trace) == trace_lines(validate(d, p, plan).trace)
