"""Render syntax trees back to PDDL text.

Output re-parses to an equal tree; it is not meant to preserve layout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .ast import (
    ActionDef,
    And,
    Assign,
    Atom,
    BinOp,
    Compare,
    DerivedDef,
    Domain,
    DurationRef,
    DurativeActionDef,
    Exists,
    Fluent,
    Forall,
    ForallEffect,
    Imply,
    Neg,
    Not,
    Num,
    Or,
    Plan,
    Problem,
    TotalTime,
    TypedName,
    When,
)

_TIMING = {"start": "at start", "end": "at end", "all": "over all"}


def number(value: Fraction) -> str:
    """Exact decimal text for ``value`` if it has one, else ``n/d`` (not re-parseable)."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled.numerator), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def typed(items: Iterable[TypedName]) -> str:
    parts = []
    for t in items:
        if t.types == ("object",):
            parts.append(t.name)
        elif len(t.types) == 1:
            parts.append(f"{t.name} - {t.types[0]}")
        else:
            parts.append(f"{t.name} - (either {' '.join(t.types)})")
    return " ".join(parts)


def expr(e) -> str:
    if isinstance(e, Num):
        return number(e.value)
    if isinstance(e, Fluent):
        return str(e)
    if isinstance(e, BinOp):
        return f"({e.op} {expr(e.lhs)} {expr(e.rhs)})"
    if isinstance(e, Neg):
        return f"(- {expr(e.arg)})"
    if isinstance(e, DurationRef):
        return "?duration"
    if isinstance(e, TotalTime):
        return "(total-time)"
    raise TypeError(f"not an expression: {e!r}")


def formula(f) -> str:
    if isinstance(f, Atom):
        return str(f)
    if isinstance(f, Not):
        return f"(not {formula(f.arg)})"
    if isinstance(f, And):
        return "(and" + "".join(" " + formula(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(or" + "".join(" " + formula(p) for p in f.parts) + ")"
    if isinstance(f, Imply):
        return f"(imply {formula(f.antecedent)} {formula(f.consequent)})"
    if isinstance(f, (Exists, Forall)):
        word = "exists" if isinstance(f, Exists) else "forall"
        return f"({word} ({typed(f.params)}) {formula(f.body)})"
    if isinstance(f, Compare):
        return f"({f.op} {expr(f.lhs)} {expr(f.rhs)})"
    raise TypeError(f"not a formula: {f!r}")


def effect(e) -> str:
    if isinstance(e, (Atom, Not)):
        return formula(e)
    if isinstance(e, Assign):
        return f"({e.op} {e.fluent} {expr(e.expr)})"
    if isinstance(e, When):
        return f"(when {formula(e.condition)} {effects(e.effects)})"
    if isinstance(e, ForallEffect):
        return f"(forall ({typed(e.params)}) {effects(e.effects)})"
    raise TypeError(f"not an effect: {e!r}")


def effects(es) -> str:
    return "(and" + "".join(" " + effect(e) for e in es) + ")"


def _structure(s) -> str:
    if isinstance(s, DerivedDef):
        return f"  (:derived {formula(s.head)}\n    {formula(s.body)})"
    if isinstance(s, ActionDef):
        return (
            f"  (:action {s.name}\n"
            f"    :parameters ({typed(s.params)})\n"
            f"    :precondition {formula(s.precondition)}\n"
            f"    :effect {effects(s.effects)})"
        )
    if isinstance(s, DurativeActionDef):
        dur = "(and" + "".join(f" ({c.op} ?duration {expr(c.expr)})" for c in s.duration) + ")"
        conds = "(and" + "".join(f" ({_TIMING[c.when]} {formula(c.formula)})" for c in s.conditions) + ")"
        effs = "(and" + "".join(f" ({_TIMING[e.when]} {effect(e.effect)})" for e in s.effects) + ")"
        return (
            f"  (:durative-action {s.name}\n"
            f"    :parameters ({typed(s.params)})\n"
            f"    :duration {dur}\n"
            f"    :condition {conds}\n"
            f"    :effect {effs})"
        )
    raise TypeError(f"not a structure: {s!r}")


def domain_to_pddl(domain: Domain) -> str:
    lines = [f"(define (domain {domain.name})"]
    lines.append("  (:requirements " + " ".join(sorted(domain.requirements)) + ")")
    if domain.types:
        lines.append("  (:types " + typed(TypedName(n, (p,)) for n, p in domain.types.items()) + ")")
    if domain.constants:
        lines.append(f"  (:constants {typed(domain.constants)})")
    if domain.predicates:
        preds = " ".join(f"({p.name}{' ' if p.params else ''}{typed(p.params)})" for p in domain.predicates)
        lines.append(f"  (:predicates {preds})")
    if domain.functions:
        fns = " ".join(f"({f.name}{' ' if f.params else ''}{typed(f.params)}) - number" for f in domain.functions)
        lines.append(f"  (:functions {fns})")
    lines.extend(_structure(s) for s in domain.structures)
    return "\n".join(lines) + ")\n"


def problem_to_pddl(problem: Problem) -> str:
    lines = [f"(define (problem {problem.name})", f"  (:domain {problem.domain_name})"]
    if problem.objects:
        lines.append(f"  (:objects {typed(problem.objects)})")
    init = [str(a) for a in sorted(problem.init, key=str)]
    init += [f"(= {f} {number(v)})" for f, v in sorted(problem.numeric_init.items(), key=lambda kv: str(kv[0]))]
    for tl in problem.timed_literals:
        lit = str(tl.atom) if tl.positive else f"(not {tl.atom})"
        init.append(f"(at {number(tl.time)} {lit})")
    lines.append("  (:init " + "\n         ".join(init) + ")")
    lines.append(f"  (:goal {formula(problem.goal)})")
    if problem.metric is not None:
        lines.append(f"  (:metric {problem.metric.direction} {expr(problem.metric.expr)})")
    return "\n".join(lines) + ")\n"


def plan_to_text(plan: Plan) -> str:
    out = []
    for step in plan.steps:
        head = f"{number(step.time)}: " if plan.explicit_times else ""
        body = "(" + " ".join((step.name,) + step.args) + ")"
        tail = f" [{number(step.duration)}]" if step.duration is not None else ""
        out.append(head + body + tail)
    return "\n".join(out) + ("\n" if out else "")
