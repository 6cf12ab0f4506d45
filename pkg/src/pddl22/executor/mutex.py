"""Interference test between two ground actions of one happening."""

from __future__ import annotations

from ..model.grounding import GroundAction


def mutex_reason(a: GroundAction, b: GroundAction) -> str | None:
    """Why ``a`` and ``b`` interfere, or None when they do not.

    Preconditions are widened by DPre, so an effect on any fact that can
    feed a derived precondition counts as interference. Two writes to the
    same fluent commute only if both are increase/decrease.
    """
    touched_a = a.add | a.delete
    touched_b = b.add | b.delete
    hit = (a.gpre | a.dpre) & touched_b
    if hit:
        return f"{b.label} affects {_one(hit)} read by {a.label}"
    hit = (b.gpre | b.dpre) & touched_a
    if hit:
        return f"{a.label} affects {_one(hit)} read by {b.label}"
    hit = (a.add & b.delete) | (b.add & a.delete)
    if hit:
        return f"{a.label} and {b.label} add and delete {_one(hit)}"
    hit = (a.lhs & b.rhs) | (a.rhs & b.lhs)
    if hit:
        return f"{a.label} and {b.label} write and read {_one(hit)}"
    hit = (a.lhs & b.lhs) - (a.additive & b.additive)
    if hit:
        return f"{a.label} and {b.label} both assign {_one(hit)}"
    return None


def mutex(a: GroundAction, b: GroundAction) -> bool:
    return mutex_reason(a, b) is not None


def _one(items) -> str:
    return min(str(x) for x in items)
