"""Basic/derived classification and the three restrictions on derivation rules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..errors import RestrictionError
from ..syntax.ast import (
    Atom,
    DerivedDef,
    Domain,
    DurativeActionDef,
    ForallEffect,
    Not,
    Problem,
    When,
    is_variable,
)
from .nnf import free_variables, literals, to_nnf


@dataclass(frozen=True)
class Classification:
    basic: frozenset[str]
    derived: frozenset[str]

    def is_derived(self, predicate: str) -> bool:
        return predicate in self.derived


@dataclass(frozen=True)
class Violation:
    restriction: int
    where: str
    detail: str

    def __str__(self) -> str:
        return f"restriction {self.restriction}: {self.where}: {self.detail}"

    def error(self) -> RestrictionError:
        return RestrictionError(self.restriction, f"{self.where}: {self.detail}")


def _effect_atoms(effects) -> Iterator[Atom]:
    for e in effects:
        if isinstance(e, Atom):
            yield e
        elif isinstance(e, Not):
            yield e.arg
        elif isinstance(e, When):
            yield from _effect_atoms(e.effects)
        elif isinstance(e, ForallEffect):
            yield from _effect_atoms(e.effects)


def _structure_effect_atoms(domain: Domain) -> Iterator[tuple[str, Atom]]:
    for act in domain.actions:
        effs = [e.effect for e in act.effects] if isinstance(act, DurativeActionDef) else act.effects
        for atom in _effect_atoms(effs):
            yield act.name, atom


def effect_violations(domain: Domain, problem: Problem | None = None) -> list[Violation]:
    derived = domain.derived_predicates
    out = [
        Violation(1, f"action {name}", f"effect on derived predicate {atom}")
        for name, atom in _structure_effect_atoms(domain)
        if atom.predicate in derived
    ]
    if problem is not None:
        out.extend(
            Violation(1, "timed initial literal", f"{tl} affects derived predicate {tl.atom.predicate}")
            for tl in problem.timed_literals
            if tl.atom.predicate in derived
        )
    return out


def classify_predicates(domain: Domain) -> Classification:
    """Split declared predicates into derived (rule heads) and basic.

    Raises :class:`RestrictionError` (restriction 1) when an action effect
    touches a derived predicate.
    """
    for v in effect_violations(domain):
        raise v.error()
    derived = domain.derived_predicates
    basic = frozenset(p.name for p in domain.predicates) - derived
    return Classification(basic, derived)


def _rule_label(rule: DerivedDef) -> str:
    return f"rule for {rule.head}"


def validate_rules(domain: Domain) -> list[Violation]:
    """Check restrictions 2 and 3 on every rule; an empty list means all rules are fine."""
    derived = domain.derived_predicates
    out: list[Violation] = []
    for rule in domain.rules:
        where = _rule_label(rule)
        head_args = rule.head.args
        constants = [a for a in head_args if not is_variable(a)]
        if constants:
            out.append(Violation(2, where, f"head argument {constants[0]} is not a variable"))
        variables = [a for a in head_args if is_variable(a)]
        repeated = sorted({v for v in variables if variables.count(v) > 1})
        if repeated:
            out.append(Violation(2, where, f"head variable {repeated[0]} is repeated"))
        free = free_variables(rule.body)
        if free != set(variables):
            extra = sorted(free - set(variables))
            missing = sorted(set(variables) - free)
            if extra:
                detail = f"body variable {extra[0]} does not occur in the head"
            else:
                detail = f"head variable {missing[0]} does not occur free in the body"
            out.append(Violation(2, where, detail))
        for positive, atom in literals(to_nnf(rule.body)):
            if not positive and atom.predicate in derived:
                out.append(Violation(3, where, f"derived predicate negated in body: (not {atom})"))
                break
    return out


def restriction_violations(domain: Domain, problem: Problem | None = None) -> list[Violation]:
    """All restriction 1-3 violations, for linting."""
    return effect_violations(domain, problem) + validate_rules(domain)


def check_restrictions(domain: Domain, problem: Problem | None = None) -> Classification:
    for v in restriction_violations(domain, problem):
        raise v.error()
    return classify_predicates(domain)
