import random
from collections import deque

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from pddl22.model import GroundModel, GroundRule, build_dependency_graph, dpre, make_action
from pddl22.syntax.ast import And, Atom, Compare, Fluent, Num
from randgen import random_rule_system


def A(p, *args):
    return Atom(p, tuple(args))


def bfs_ancestors(rules, target):
    """Facts with a path of length >= 1 into ``target``, by plain BFS over rules."""
    seen = set()
    todo = deque([target])
    while todo:
        f = todo.popleft()
        for r in rules:
            if r.head == f:
                for g in r.body_facts:
                    if g not in seen:
                        seen.add(g)
                        todo.append(g)
    return seen


def test_edges_follow_rule_bodies():
    rule = GroundRule(A("above", "a", "c"), And((A("on", "a", "b"), A("above", "b", "c"))))
    g = build_dependency_graph([rule])
    assert g.has_edge(A("on", "a", "b"), A("above", "a", "c"))
    assert g.has_edge(A("above", "b", "c"), A("above", "a", "c"))
    assert len(g) == 2


def test_empty_graph():
    g = build_dependency_graph([])
    assert len(g) == 0 and g.nodes == set()


def test_paths_are_transitive():
    g = build_dependency_graph([GroundRule(A("q"), A("p")), GroundRule(A("r"), A("q"))])
    assert g.has_path(A("p"), A("r"))
    assert not g.has_path(A("r"), A("p"))


def test_comparisons_contribute_no_edges():
    g = build_dependency_graph([GroundRule(A("q"), Compare(">", Fluent("f"), Num(0)))])
    assert len(g) == 0


def test_dpre_of_above_precondition():
    domain, problem = load("blocks/domain.pddl", "blocks/problem.pddl")
    model = GroundModel(domain, problem)
    action = make_action("check", (), precondition=A("above", "a", "c"), graph=model.graph)
    expected = bfs_ancestors(model.rules, A("above", "a", "c"))
    assert action.dpre == expected
    assert {A("on", "a", "b"), A("on", "b", "c"), A("on", "a", "c"), A("above", "b", "c")} <= action.dpre


def test_dpre_empty_without_derived_preconditions():
    domain, problem = load("blocks/domain.pddl", "blocks/problem.pddl")
    model = GroundModel(domain, problem)
    assert model.action("move-to-table", ("a", "b")).dpre == frozenset()
    assert make_action("noop", (), graph=model.graph).dpre == frozenset()


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_ancestors_match_bfs(seed):
    rng = random.Random(seed)
    _, rules, universe = random_rule_system(rng)
    g = build_dependency_graph(rules)
    for f in universe:
        assert g.ancestors(f) == bfs_ancestors(rules, f)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_dpre_monotone_in_rules(seed):
    rng = random.Random(seed)
    _, rules, universe = random_rule_system(rng)
    target = sorted(universe, key=str)[: rng.randint(1, 4)]
    action = make_action("x", (), precondition=And(tuple(target)))
    smaller = dpre(action, build_dependency_graph(rules[:-1]))
    larger = dpre(action, build_dependency_graph(rules))
    assert smaller <= larger
