"""Derived-fact closure of a set of basic facts.

:func:`closure` runs a semi-naive fixed point: every rule is tried once,
after which a rule is only retried when a fact mentioned in its body has
just been derived. Rule bodies never contain negated derived facts, so a
derived fact can never be invalidated and the application order is
irrelevant. :func:`closure_oracle` computes the same set the slow way, as
the intersection of all rule-closed supersets, and exists for testing.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .syntax.ast import (
    And,
    Atom,
    BinOp,
    Compare,
    Fact,
    Fluent,
    Imply,
    Neg,
    Not,
    Num,
    Or,
)

ORACLE_MAX_FACTS = 16


@dataclass(frozen=True)
class ClosedState:
    basic: frozenset[Fact]
    derived: frozenset[Fact]

    @property
    def facts(self) -> frozenset[Fact]:
        return self.basic | self.derived

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.basic or fact in self.derived


def closure(basic: Iterable[Fact], rules: Sequence, values: Mapping[Fluent, Fraction] | None = None,
            *, rng: random.Random | None = None) -> ClosedState:
    """Least superset of ``basic`` closed under ``rules``.

    ``values`` supplies fluents for numeric comparisons in rule bodies; they
    are constant for the duration of the computation. ``rng`` shuffles the
    order in which pending rules are tried (the result does not change).
    """
    from .executor.evaluate import evaluate

    basic = frozenset(basic)
    if not rules:
        return ClosedState(basic, frozenset())
    values = values or {}
    rules = list(rules)
    facts = set(basic)
    derived: set[Fact] = set()

    watchers: dict[Fact, list[int]] = {}
    for i, rule in enumerate(rules):
        for fact in rule.body_facts:
            watchers.setdefault(fact, []).append(i)

    order = list(range(len(rules)))
    if rng is not None:
        rng.shuffle(order)
    pending = deque(order)
    queued = set(order)
    while pending:
        i = pending.popleft()
        queued.discard(i)
        rule = rules[i]
        if rule.head in facts or not evaluate(rule.body, facts, values):
            continue
        facts.add(rule.head)
        derived.add(rule.head)
        woken = [j for j in watchers.get(rule.head, ()) if j not in queued and rules[j].head not in facts]
        if rng is not None:
            rng.shuffle(woken)
        pending.extend(woken)
        queued.update(woken)
    return ClosedState(basic, frozenset(derived))


def naive_closure(basic: Iterable[Fact], rules: Sequence, values: Mapping[Fluent, Fraction] | None = None,
                  *, rng: random.Random | None = None) -> ClosedState:
    """The plain select-apply loop: pick any applicable rule with a new head until none is left."""
    from .executor.evaluate import evaluate

    basic = frozenset(basic)
    values = values or {}
    facts = set(basic)
    rules = list(rules)
    while True:
        applicable = [r for r in rules if r.head not in facts and evaluate(r.body, facts, values)]
        if not applicable:
            break
        pick = rng.choice(applicable) if rng is not None else applicable[0]
        facts.add(pick.head)
    return ClosedState(basic, frozenset(facts - basic))


class OracleTooLarge(ValueError):
    pass


def closure_oracle(basic: Iterable[Fact], rules: Sequence, values: Mapping[Fluent, Fraction] | None = None,
                   *, max_facts: int = ORACLE_MAX_FACTS) -> ClosedState:
    """Intersection of every superset of ``basic`` that is closed under ``rules``.

    Supersets differ from ``basic`` only in derived facts (rule heads), so
    every basic fact outside ``basic`` stays false, exactly as when the
    state is queried. Heads never mentioned by a rule are irrelevant, and a
    closed superset restricted to the heads is still closed, so enumerating
    subsets of the heads suffices. Refuses universes above ``max_facts``.
    """
    basic = frozenset(basic)
    values = values or {}
    universe = set(basic)
    for r in rules:
        universe.add(r.head)
        universe |= r.body_facts
    ordered = sorted(universe, key=lambda f: (f.predicate, f.args))
    if len(ordered) > max_facts:
        raise OracleTooLarge(f"{len(ordered)} facts exceed the oracle limit of {max_facts}")
    bit = {f: 1 << i for i, f in enumerate(ordered)}
    base = 0
    for f in basic:
        base |= bit[f]
    free = 0
    for r in rules:
        free |= bit[r.head]
    free &= ~base
    compiled = [(bit[r.head], _body_test(r.body, bit, values)) for r in rules]

    result = (1 << len(ordered)) - 1
    sub = free
    while True:
        mask = base | sub
        if all(mask & head or not test(mask) for head, test in compiled):
            result &= mask
        if sub == 0:
            break
        sub = (sub - 1) & free
    derived = frozenset(f for f in ordered if result & bit[f] and f not in basic)
    return ClosedState(basic, derived)


def _body_test(f, bit: dict[Fact, int], values: Mapping[Fluent, Fraction]):
    """Compile a ground body into a predicate over fact bitmasks."""
    if isinstance(f, Atom):
        b = bit[f]
        return lambda m: bool(m & b)
    if isinstance(f, Not):
        inner = _body_test(f.arg, bit, values)
        return lambda m: not inner(m)
    if isinstance(f, And):
        parts = [_body_test(p, bit, values) for p in f.parts]
        return lambda m: all(p(m) for p in parts)
    if isinstance(f, Or):
        parts = [_body_test(p, bit, values) for p in f.parts]
        return lambda m: any(p(m) for p in parts)
    if isinstance(f, Imply):
        a = _body_test(f.antecedent, bit, values)
        c = _body_test(f.consequent, bit, values)
        return lambda m: not a(m) or c(m)
    if isinstance(f, Compare):
        truth = _compare(f, values)
        return lambda m: truth
    raise TypeError(f"oracle cannot evaluate {f!r}")


def _num(e, values) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Fluent):
        return values[e]
    if isinstance(e, Neg):
        return -_num(e.arg, values)
    if isinstance(e, BinOp):
        a, b = _num(e.lhs, values), _num(e.rhs, values)
        return {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b, "/": lambda: a / b}[e.op]()
    raise TypeError(f"oracle cannot evaluate {e!r}")


def _compare(c: Compare, values) -> bool:
    a, b = _num(c.lhs, values), _num(c.rhs, values)
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b, "=": a == b}[c.op]
