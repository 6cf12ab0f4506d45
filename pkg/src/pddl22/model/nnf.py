"""Negation normal form and small formula utilities."""

from __future__ import annotations

from typing import Iterator

from ..syntax.ast import (
    And,
    Atom,
    BinOp,
    Compare,
    Exists,
    Fluent,
    Forall,
    Formula,
    Imply,
    Neg,
    Not,
    Or,
    is_variable,
)


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms (and numeric comparisons).

    ``imply`` is rewritten to a disjunction first; everything else follows
    De Morgan and quantifier duality, and double negations cancel.
    """
    if isinstance(f, (Atom, Compare)):
        return f
    if isinstance(f, Not):
        return _negate(f.arg)
    if isinstance(f, And):
        return And(tuple(to_nnf(p) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(to_nnf(p) for p in f.parts))
    if isinstance(f, Imply):
        return Or((_negate(f.antecedent), to_nnf(f.consequent)))
    if isinstance(f, Exists):
        return Exists(f.params, to_nnf(f.body))
    if isinstance(f, Forall):
        return Forall(f.params, to_nnf(f.body))
    raise TypeError(f"not a formula: {f!r}")


def _negate(f: Formula) -> Formula:
    if isinstance(f, (Atom, Compare)):
        return Not(f)
    if isinstance(f, Not):
        return to_nnf(f.arg)
    if isinstance(f, And):
        return Or(tuple(_negate(p) for p in f.parts))
    if isinstance(f, Or):
        return And(tuple(_negate(p) for p in f.parts))
    if isinstance(f, Imply):
        return And((to_nnf(f.antecedent), _negate(f.consequent)))
    if isinstance(f, Exists):
        return Forall(f.params, _negate(f.body))
    if isinstance(f, Forall):
        return Exists(f.params, _negate(f.body))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.arg, (Atom, Compare))
    if isinstance(f, (And, Or)):
        return all(is_nnf(p) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        return is_nnf(f.body)
    return isinstance(f, (Atom, Compare))


def literals(f: Formula, positive: bool = True) -> Iterator[tuple[bool, Atom]]:
    """Yield (polarity, atom) for every atom occurrence, tracking negation."""
    if isinstance(f, Atom):
        yield positive, f
    elif isinstance(f, Not):
        yield from literals(f.arg, not positive)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            yield from literals(p, positive)
    elif isinstance(f, Imply):
        yield from literals(f.antecedent, not positive)
        yield from literals(f.consequent, positive)
    elif isinstance(f, (Exists, Forall)):
        yield from literals(f.body, positive)


def atoms(f: Formula) -> Iterator[Atom]:
    for _, a in literals(f):
        yield a


def fluents(e) -> Iterator[Fluent]:
    """Fluents read by a numeric expression or by the comparisons of a formula."""
    if isinstance(e, Fluent):
        yield e
    elif isinstance(e, BinOp):
        yield from fluents(e.lhs)
        yield from fluents(e.rhs)
    elif isinstance(e, Neg):
        yield from fluents(e.arg)
    elif isinstance(e, Compare):
        yield from fluents(e.lhs)
        yield from fluents(e.rhs)
    elif isinstance(e, Not):
        yield from fluents(e.arg)
    elif isinstance(e, (And, Or)):
        for p in e.parts:
            yield from fluents(p)
    elif isinstance(e, Imply):
        yield from fluents(e.antecedent)
        yield from fluents(e.consequent)
    elif isinstance(e, (Exists, Forall)):
        yield from fluents(e.body)


def free_variables(f) -> set[str]:
    """Variables of a formula or expression not bound by a quantifier."""
    if isinstance(f, (Atom, Fluent)):
        return {a for a in f.args if is_variable(a)}
    if isinstance(f, (Not, Neg)):
        return free_variables(f.arg)
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for p in f.parts:
            out |= free_variables(p)
        return out
    if isinstance(f, Imply):
        return free_variables(f.antecedent) | free_variables(f.consequent)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body) - {p.name for p in f.params}
    if isinstance(f, (Compare, BinOp)):
        return free_variables(f.lhs) | free_variables(f.rhs)
    return set()
