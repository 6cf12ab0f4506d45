"""Truth of ground formulas and values of ground numeric expressions."""

from __future__ import annotations

from fractions import Fraction
from typing import Collection, Mapping

from ..syntax.ast import (
    And,
    Atom,
    BinOp,
    Compare,
    DurationRef,
    Exists,
    Fluent,
    Forall,
    Imply,
    Neg,
    Not,
    Num,
    Or,
    TotalTime,
)


class UndefinedValue(Exception):
    """A numeric expression read an unassigned fluent or divided by zero."""

    def __init__(self, message: str, fluent: Fluent | None = None):
        super().__init__(message)
        self.fluent = fluent


def eval_expr(e, values: Mapping[Fluent, Fraction], total_time: Fraction | None = None) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Fluent):
        try:
            return values[e]
        except KeyError:
            raise UndefinedValue(f"{e} is undefined", e) from None
    if isinstance(e, BinOp):
        a = eval_expr(e.lhs, values, total_time)
        b = eval_expr(e.rhs, values, total_time)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            raise UndefinedValue("division by zero")
        return a / b
    if isinstance(e, Neg):
        return -eval_expr(e.arg, values, total_time)
    if isinstance(e, TotalTime):
        if total_time is None:
            raise UndefinedValue("total-time is only defined in the metric")
        return total_time
    if isinstance(e, DurationRef):
        raise UndefinedValue("?duration is unbound")
    raise TypeError(f"not an expression: {e!r}")


def compare(op: str, a: Fraction, b: Fraction) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "=":
        return a == b
    raise ValueError(f"unknown comparison {op}")


def evaluate(f, facts: Collection[Atom], values: Mapping[Fluent, Fraction] | None = None) -> bool:
    """Whether ground formula ``f`` holds in the state given by ``facts`` and ``values``.

    ``facts`` must already contain the derived facts. Raises
    :class:`UndefinedValue` when a comparison reads an undefined fluent.
    """
    if isinstance(f, Atom):
        if f.predicate == "=":
            return f.args[0] == f.args[1]
        return f in facts
    if isinstance(f, Not):
        return not evaluate(f.arg, facts, values)
    if isinstance(f, And):
        return all(evaluate(p, facts, values) for p in f.parts)
    if isinstance(f, Or):
        return any(evaluate(p, facts, values) for p in f.parts)
    if isinstance(f, Imply):
        return not evaluate(f.antecedent, facts, values) or evaluate(f.consequent, facts, values)
    if isinstance(f, Compare):
        values = values or {}
        return compare(f.op, eval_expr(f.lhs, values), eval_expr(f.rhs, values))
    if isinstance(f, (Exists, Forall)):
        raise TypeError("quantified formulas must be grounded before evaluation")
    raise TypeError(f"not a formula: {f!r}")
