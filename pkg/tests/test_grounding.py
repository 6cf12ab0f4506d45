import itertools
import random
from fractions import Fraction

import pytest

from conftest import load
from pddl22.executor import evaluate
from pddl22.model import GroundModel, ObjectIndex, ground, ground_formula
from pddl22.model.grounding import INSTANT
from pddl22.syntax import parse_domain, parse_problem
from pddl22.syntax.ast import (
    ActionDef,
    And,
    Atom,
    Compare,
    Exists,
    Fluent,
    Forall,
    Imply,
    Not,
    Num,
    Or,
    TypedName,
    is_variable,
)


# --- brute-force oracle: lifted evaluation under a binding --------------------

def objects_of(domain, problem):
    out = {c.name: c.types[0] for c in domain.constants}
    out.update((o.name, o.types[0]) for o in problem.objects)
    return out


def is_a(domain, ty, wanted):
    while True:
        if ty in wanted:
            return True
        if ty == "object":
            return False
        ty = domain.types.get(ty, "object")


def fits(domain, objects, params, args):
    return all(is_a(domain, objects[a], p.types) for a, p in zip(args, params))


def all_bindings(domain, objects, params):
    for args in itertools.product(sorted(objects), repeat=len(params)):
        if fits(domain, objects, params, args):
            yield dict(zip((p.name for p in params), args))


def sub(args, b):
    return tuple(b[a] if is_variable(a) else a for a in args)


def lifted_eval(f, b, facts, values, ctx):
    domain, objects = ctx
    if isinstance(f, Atom):
        args = sub(f.args, b)
        return args[0] == args[1] if f.predicate == "=" else Atom(f.predicate, args) in facts
    if isinstance(f, Not):
        return not lifted_eval(f.arg, b, facts, values, ctx)
    if isinstance(f, And):
        return all(lifted_eval(p, b, facts, values, ctx) for p in f.parts)
    if isinstance(f, Or):
        return any(lifted_eval(p, b, facts, values, ctx) for p in f.parts)
    if isinstance(f, Imply):
        return not lifted_eval(f.antecedent, b, facts, values, ctx) or lifted_eval(f.consequent, b, facts, values, ctx)
    if isinstance(f, (Exists, Forall)):
        test = any if isinstance(f, Exists) else all
        return test(lifted_eval(f.body, {**b, **inner}, facts, values, ctx)
                    for inner in all_bindings(domain, objects, f.params))
    if isinstance(f, Compare):
        def num(e):
            if isinstance(e, Num):
                return e.value
            return values[Fluent(e.name, sub(e.args, b))]
        a, c = num(f.lhs), num(f.rhs)
        return {"<": a < c, "<=": a <= c, ">": a > c, ">=": a >= c, "=": a == c}[f.op]
    raise TypeError(f)


def ground_facts(domain, objects):
    out = []
    for pred in domain.predicates:
        for b in all_bindings(domain, objects, pred.params):
            out.append(Atom(pred.name, tuple(b[p.name] for p in pred.params)))
    return out


def random_facts(rng, universe):
    return frozenset(f for f in universe if rng.random() < 0.4)


CASES = [
    ("blocks/domain.pddl", "blocks/problem.pddl"),
    ("mutex/domain-derived.pddl", "mutex/problem-derived.pddl"),
    ("fuel/domain.pddl", "fuel/problem.pddl"),
    ("lint/legal/universal-over-derived/domain.pddl", "lint/legal/universal-over-derived/problem.pddl"),
    ("lint/legal/negated-forall-of-basic/domain.pddl", "lint/legal/negated-forall-of-basic/problem.pddl"),
    ("lint/legal/equality-in-body/domain.pddl", "lint/legal/equality-in-body/problem.pddl"),
]


@pytest.mark.parametrize("dpath,ppath", CASES)
def test_grounding_matches_brute_force(dpath, ppath):
    domain, problem = load(dpath, ppath)
    objects = objects_of(domain, problem)
    assert len(objects) <= 4
    actions, rules = ground(domain, problem)
    rng = random.Random(7)
    universe = ground_facts(domain, objects)
    values = {Fluent(f.name, tuple(b[p.name] for p in f.params)): Fraction(rng.randint(0, 6))
              for f in domain.functions for b in all_bindings(domain, objects, f.params)}
    states = [random_facts(rng, universe) for _ in range(30)]
    ctx = (domain, objects)

    expected_actions = {
        (a.name, tuple(b[p.name] for p in a.params)): (a, b)
        for a in domain.actions if isinstance(a, ActionDef)
        for b in all_bindings(domain, objects, a.params)
    }
    got = {(a.name, a.args): a for a in actions if a.origin == INSTANT}
    assert set(got) == set(expected_actions)
    for key, (schema, b) in expected_actions.items():
        ga = got[key]
        for s in states:
            assert evaluate(ga.precondition, s, values) == lifted_eval(schema.precondition, b, s, values, ctx)
        plain = [e for e in schema.effects if isinstance(e, (Atom, Not))]
        assert {Atom(e.predicate, sub(e.args, b)) for e in plain if isinstance(e, Atom)} <= ga.add
        assert {Atom(e.arg.predicate, sub(e.arg.args, b)) for e in plain if isinstance(e, Not)} <= ga.delete

    expected_rules = {}
    for rule in domain.rules:
        pred = domain.predicate(rule.head.predicate)
        params = tuple(TypedName(v, p.types) for v, p in zip(rule.head.args, pred.params))
        for b in all_bindings(domain, objects, params):
            expected_rules.setdefault(Atom(rule.head.predicate, sub(rule.head.args, b)), []).append((rule, b))
    got_rules = {}
    for r in rules:
        got_rules.setdefault(r.head, []).append(r)
    assert set(got_rules) == set(expected_rules)
    for head, instances in expected_rules.items():
        assert len(got_rules[head]) == len(instances)
        for s in states:
            want = any(lifted_eval(rule.body, b, s, values, ctx) for rule, b in instances)
            assert any(evaluate(r.body, s, values) for r in got_rules[head]) == want


def test_three_block_above_rules():
    domain, problem = load("blocks/domain.pddl", "blocks/problem.pddl")
    _, rules = ground(domain, problem)
    heads = sorted(r.head.args for r in rules)
    assert heads == sorted(itertools.product("abc", repeat=2))


def test_no_objects_of_a_type_means_no_instances():
    domain = parse_domain("""(define (domain t) (:requirements :typing)
      (:types truck place) (:predicates (at ?t - truck ?p - place))
      (:action park :parameters (?t - truck ?p - place) :precondition (at ?t ?p) :effect (not (at ?t ?p))))""")
    problem = parse_problem("(define (problem t1) (:domain t) (:objects home - place) (:goal (and)))", domain)
    actions, _ = ground(domain, problem)
    assert actions == frozenset()


def test_exists_expands_to_one_disjunct_per_object():
    domain = parse_domain("(define (domain t) (:requirements :adl) (:predicates (on ?x ?y)))")
    problem = parse_problem("(define (problem t1) (:domain t) (:objects a b) (:goal (and)))", domain)
    f = Exists((TypedName("?z"),), Atom("on", ("?x", "?z")))
    assert ground_formula(f, {"?x": "a"}, ObjectIndex(domain, problem)) == Or(
        (Atom("on", ("a", "a")), Atom("on", ("a", "b"))))


def test_equality_is_decided_during_grounding():
    domain = parse_domain("(define (domain t) (:requirements :adl) (:predicates (on ?x ?y)))")
    problem = parse_problem("(define (problem t1) (:domain t) (:objects a b) (:goal (and)))", domain)
    idx = ObjectIndex(domain, problem)
    assert ground_formula(Atom("=", ("?x", "b")), {"?x": "a"}, idx) == Or(())
    assert ground_formula(Atom("=", ("?x", "a")), {"?x": "a"}, idx) == And(())


def test_lazy_and_eager_grounding_agree():
    domain, problem = load("blocks/domain.pddl", "blocks/problem.pddl")
    model = GroundModel(domain, problem)
    lazy = model.action("move-to-table", ("a", "b"))
    eager, _ = ground(domain, problem)
    assert lazy in eager


def test_action_sets():
    domain, problem = load("fuel/domain.pddl", "fuel/problem.pddl")
    drive = GroundModel(domain, problem).action("drive", ("t1", "home", "depot"))
    assert drive.gpre == {Atom("at", ("t1", "home")), Atom("road", ("home", "depot"))}
    assert drive.add == {Atom("at", ("t1", "depot"))}
    assert drive.delete == {Atom("at", ("t1", "home"))}
    fuel, spent, dist = Fluent("fuel", ("t1",)), Fluent("spent"), Fluent("distance", ("home", "depot"))
    assert drive.lhs == {fuel, spent}
    assert drive.additive == {fuel, spent}
    assert drive.rhs == {fuel, dist}


def test_durative_split():
    domain, problem = load("fly/domain.pddl", "fly/problem.pddl")
    split = GroundModel(domain, problem).action("fly", ("p1", "ams", "lhr"), Fraction(3))
    assert split.start.gpre == {Atom("at", ("p1", "ams")), Atom("runway-open", ("ams",))}
    assert split.end.gpre == {Atom("runway-open", ("lhr",))}
    assert split.invariant.effects == ()
    assert split.start.duration_constraints[0].expr == Fluent("flight-time", ("ams", "lhr"))
    assert Fluent("flight-time", ("ams", "lhr")) in split.start.rhs


def test_til_action():
    domain, problem = load("shop/domain.pddl", "shop/problem.pddl")
    model = GroundModel(domain, problem)
    closing = model.til_action(problem.timed_literals[1])
    assert closing.precondition == And(())
    assert closing.delete == {Atom("shop-open")} and closing.add == frozenset()
