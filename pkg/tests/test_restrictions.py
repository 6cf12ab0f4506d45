import pytest

from conftest import FIXTURES
from pddl22.errors import RestrictionError
from pddl22.model import check_restrictions, classify_predicates, restriction_violations, validate_rules
from pddl22.syntax import parse_domain, parse_problem

BLOCKS = (FIXTURES / "blocks" / "domain.pddl").read_text()

HEADER = """(define (domain t) (:requirements :adl :derived-predicates)
  (:predicates (on ?x ?y) (clear ?x) (above ?x ?y) (p ?x ?y))
"""


def domain_with(body: str):
    return parse_domain(HEADER + body + ")")


def test_blocks_classification():
    c = classify_predicates(parse_domain(BLOCKS))
    assert c.derived == {"above"}
    assert c.basic == {"on", "clear", "ontable"}


def test_no_rules_means_no_derived():
    c = classify_predicates(parse_domain((FIXTURES / "mutex" / "domain-plain.pddl").read_text()))
    assert c.derived == frozenset()


def test_effect_on_derived_predicate():
    d = domain_with("""(:derived (above ?x ?y) (on ?x ?y))
      (:action cheat :parameters (?a ?b) :precondition (clear ?a) :effect (above ?a ?b))""")
    with pytest.raises(RestrictionError) as err:
        classify_predicates(d)
    assert err.value.restriction == 1


def test_above_rule_is_fine():
    assert validate_rules(parse_domain(BLOCKS)) == []


def test_repeated_head_variable():
    (v,) = validate_rules(domain_with("(:derived (p ?x ?x) (on ?x ?x))"))
    assert v.restriction == 2


def test_constant_in_head():
    d = parse_domain("""(define (domain t) (:requirements :adl :derived-predicates)
      (:constants a) (:predicates (on ?x ?y) (p ?x ?y)) (:derived (p ?x a) (on ?x a)))""")
    assert [v.restriction for v in validate_rules(d)] == [2]


def test_negated_derived_in_body():
    d = domain_with("""(:derived (above ?x ?y) (on ?x ?y))
      (:derived (p ?x ?y) (and (on ?x ?y) (not (above ?y ?x))))""")
    assert [v.restriction for v in validate_rules(d)] == [3]


def test_negation_hidden_by_quantifier_and_implication():
    d = domain_with("""(:derived (above ?x ?y) (on ?x ?y))
      (:derived (p ?x ?y) (and (on ?x ?y) (forall (?z) (imply (above ?z ?x) (clear ?z)))))""")
    assert [v.restriction for v in validate_rules(d)] == [3]


def test_double_negation_is_fine():
    d = domain_with("""(:derived (above ?x ?y) (on ?x ?y))
      (:derived (p ?x ?y) (not (not (above ?x ?y))))""")
    assert validate_rules(d) == []


def _cases(kind):
    return sorted(p for p in (FIXTURES / "lint" / kind).iterdir() if p.is_dir())


@pytest.mark.parametrize("case", _cases("illegal"), ids=lambda p: p.name)
def test_illegal_corpus(case):
    expected = int(case.name[1])
    domain = parse_domain((case / "domain.pddl").read_text())
    try:
        problem = parse_problem((case / "problem.pddl").read_text(), domain)
    except RestrictionError as err:
        assert err.restriction == expected
        return
    found = {v.restriction for v in restriction_violations(domain, problem)}
    assert found == {expected}
    with pytest.raises(RestrictionError) as err:
        check_restrictions(domain, problem)
    assert err.value.restriction == expected


@pytest.mark.parametrize("case", _cases("legal"), ids=lambda p: p.name)
def test_legal_corpus(case):
    domain = parse_domain((case / "domain.pddl").read_text())
    problem = parse_problem((case / "problem.pddl").read_text(), domain)
    assert restriction_violations(domain, problem) == []
    check_restrictions(domain, problem)
