"""Immutable syntax trees for domains, problems, formulas and effects.

Formulas double as their own ground form: an :class:`Atom` whose arguments
are all object names is a ground fact, and states are plain sets of such
atoms. Numeric state variables are keyed the same way by :class:`Fluent`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union


def is_variable(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True, slots=True)
class TypedName:
    """A parameter, object or constant with its (possibly ``either``) type."""

    name: str
    types: tuple[str, ...] = ("object",)


# --------------------------------------------------------------------------
# Numeric expressions


@dataclass(frozen=True, slots=True)
class Num:
    value: Fraction


@dataclass(frozen=True, slots=True)
class Fluent:
    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str  # one of + - * /
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True, slots=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class DurationRef:
    """The ``?duration`` variable of a durative action."""


@dataclass(frozen=True, slots=True)
class TotalTime:
    """``total-time`` in a metric; bound to the plan's makespan."""


Expr = Union[Num, Fluent, BinOp, Neg, DurationRef, TotalTime]


# --------------------------------------------------------------------------
# Formulas (goal descriptions)


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    parts: tuple["Formula", ...] = ()


@dataclass(frozen=True, slots=True)
class Or:
    parts: tuple["Formula", ...] = ()


@dataclass(frozen=True, slots=True)
class Imply:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    params: tuple[TypedName, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    params: tuple[TypedName, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Compare:
    op: str  # one of < <= > >= =
    lhs: Expr
    rhs: Expr


Formula = Union[Atom, Not, And, Or, Imply, Exists, Forall, Compare]

TRUE = And(())
FALSE = Or(())

# Ground facts are atoms over object names.
Fact = Atom


# --------------------------------------------------------------------------
# Effects


@dataclass(frozen=True, slots=True)
class Assign:
    """Numeric effect; ``op`` is assign, increase, decrease, scale-up or scale-down."""

    op: str
    fluent: Fluent
    expr: Expr


@dataclass(frozen=True, slots=True)
class When:
    condition: Formula
    effects: tuple["Effect", ...]


@dataclass(frozen=True, slots=True)
class ForallEffect:
    params: tuple[TypedName, ...]
    effects: tuple["Effect", ...]


# A literal effect is an Atom (add) or Not(Atom) (delete).
Effect = Union[Atom, Not, Assign, When, ForallEffect]

ADDITIVE_OPS = frozenset({"increase", "decrease"})
ASSIGN_OPS = ("assign", "increase", "decrease", "scale-up", "scale-down")


# --------------------------------------------------------------------------
# Durative actions


@dataclass(frozen=True, slots=True)
class DurationConstraint:
    op: str  # = <= >=
    expr: Expr


@dataclass(frozen=True, slots=True)
class TimedCondition:
    when: str  # start | end | all
    formula: Formula


@dataclass(frozen=True, slots=True)
class TimedEffect:
    when: str  # start | end
    effect: Effect


# --------------------------------------------------------------------------
# Definitions


@dataclass(frozen=True, slots=True)
class PredicateDef:
    name: str
    params: tuple[TypedName, ...] = ()


@dataclass(frozen=True, slots=True)
class FunctionDef:
    name: str
    params: tuple[TypedName, ...] = ()


@dataclass(frozen=True, slots=True)
class ActionDef:
    name: str
    params: tuple[TypedName, ...]
    precondition: Formula = TRUE
    effects: tuple[Effect, ...] = ()


@dataclass(frozen=True, slots=True)
class DurativeActionDef:
    name: str
    params: tuple[TypedName, ...]
    duration: tuple[DurationConstraint, ...] = ()
    conditions: tuple[TimedCondition, ...] = ()
    effects: tuple[TimedEffect, ...] = ()

    def condition(self, when: str) -> Formula:
        parts = tuple(c.formula for c in self.conditions if c.when == when)
        return parts[0] if len(parts) == 1 else And(parts)

    def effects_at(self, when: str) -> tuple[Effect, ...]:
        return tuple(e.effect for e in self.effects if e.when == when)


@dataclass(frozen=True, slots=True)
class DerivedDef:
    head: Atom
    body: Formula


Structure = Union[ActionDef, DurativeActionDef, DerivedDef]


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: frozenset[str] = frozenset()
    types: Mapping[str, str] = field(default_factory=dict)  # name -> parent
    constants: tuple[TypedName, ...] = ()
    predicates: tuple[PredicateDef, ...] = ()
    functions: tuple[FunctionDef, ...] = ()
    structures: tuple[Structure, ...] = ()

    @property
    def actions(self) -> tuple[ActionDef | DurativeActionDef, ...]:
        return tuple(s for s in self.structures if not isinstance(s, DerivedDef))

    @property
    def rules(self) -> tuple[DerivedDef, ...]:
        return tuple(s for s in self.structures if isinstance(s, DerivedDef))

    @property
    def derived_predicates(self) -> frozenset[str]:
        return frozenset(r.head.predicate for r in self.rules)

    def predicate(self, name: str) -> PredicateDef | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def function(self, name: str) -> FunctionDef | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def action(self, name: str) -> ActionDef | DurativeActionDef | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None

    def supertypes(self, name: str) -> list[str]:
        """``name`` followed by its ancestors up to ``object``."""
        chain = [name]
        seen = {name}
        while chain[-1] != "object":
            parent = self.types.get(chain[-1], "object")
            if parent in seen:
                break
            chain.append(parent)
            seen.add(parent)
        return chain


@dataclass(frozen=True, slots=True)
class TimedLiteral:
    time: Fraction
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        lit = str(self.atom) if self.positive else f"(not {self.atom})"
        return f"(at {self.time} {lit})"


@dataclass(frozen=True, slots=True)
class Metric:
    direction: str  # minimize | maximize
    expr: Expr


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    requirements: frozenset[str] = frozenset()
    objects: tuple[TypedName, ...] = ()
    init: frozenset[Atom] = frozenset()
    numeric_init: Mapping[Fluent, Fraction] = field(default_factory=dict)
    timed_literals: tuple[TimedLiteral, ...] = ()
    goal: Formula = TRUE
    metric: Metric | None = None


@dataclass(frozen=True, slots=True)
class PlanStep:
    time: Fraction
    name: str
    args: tuple[str, ...] = ()
    duration: Fraction | None = None
    line: int = 0

    def __str__(self) -> str:
        text = f"{_fmt(self.time)}: (" + " ".join((self.name,) + self.args) + ")"
        if self.duration is not None:
            text += f" [{_fmt(self.duration)}]"
        return text


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...] = ()
    explicit_times: bool = True

    def __len__(self) -> int:
        return len(self.steps)


def _fmt(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else str(value)
