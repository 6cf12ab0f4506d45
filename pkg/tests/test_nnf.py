import random

from hypothesis import given, settings
from hypothesis import strategies as st

from pddl22.executor import evaluate
from pddl22.model import is_nnf, to_nnf
from pddl22.model.grounding import ObjectIndex, ground_formula
from pddl22.syntax import parse_domain, parse_problem
from pddl22.syntax.ast import And, Atom, Exists, Forall, Imply, Not, Or, TypedName
from randgen import OBJECTS, random_formula, random_state

p, q = Atom("p"), Atom("q")
on_xz = Atom("on", ("?x", "?z"))
Z = (TypedName("?z"),)


def test_de_morgan():
    assert to_nnf(Not(And((p, q)))) == Or((Not(p), Not(q)))
    assert to_nnf(Not(Or((p, q)))) == And((Not(p), Not(q)))


def test_negated_exists_becomes_forall():
    assert to_nnf(Not(Exists(Z, on_xz))) == Forall(Z, Not(on_xz))
    assert to_nnf(Not(Forall(Z, on_xz))) == Exists(Z, Not(on_xz))


def test_atom_is_fixed_point():
    assert to_nnf(p) == p
    assert to_nnf(Not(p)) == Not(p)


def test_double_negation_and_implication():
    assert to_nnf(Not(Not(p))) == p
    assert to_nnf(Imply(p, q)) == Or((Not(p), q))
    assert to_nnf(Not(Imply(p, q))) == And((p, Not(q)))


def _objects():
    domain = parse_domain("(define (domain u) (:requirements :adl :fluents) (:predicates (p ?x) (q ?x ?y) (r))"
                          " (:functions (f) (g ?x)))")
    problem = parse_problem("(define (problem u1) (:domain u) (:objects " + " ".join(OBJECTS) + ") (:goal (and)))",
                            domain)
    return ObjectIndex(domain, problem)


OBJECT_INDEX = _objects()


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_nnf_preserves_truth(seed):
    rng = random.Random(seed)
    f = random_formula(rng)
    facts, values = random_state(rng)
    nnf = to_nnf(f)
    assert is_nnf(nnf)
    before = evaluate(ground_formula(f, {}, OBJECT_INDEX), facts, values)
    after = evaluate(ground_formula(nnf, {}, OBJECT_INDEX), facts, values)
    assert before == after


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_nnf_is_idempotent(seed):
    f = to_nnf(random_formula(random.Random(seed)))
    assert to_nnf(f) == f
