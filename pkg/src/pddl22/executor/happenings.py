"""From a plan and the timed initial literals to an ordered happening sequence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..model.grounding import DurativeSplit, GroundAction, GroundModel
from ..syntax.ast import Plan
from .types import Happening, Interval


@dataclass(frozen=True)
class Schedule:
    """Plan steps split into timed simple actions (before grouping)."""

    actions: tuple[tuple[Fraction, GroundAction], ...]
    intervals: tuple[tuple[Fraction, Fraction, GroundAction], ...]
    tils: tuple[tuple[Fraction, GroundAction], ...]


def schedule(plan: Plan, model: GroundModel) -> Schedule:
    actions: list[tuple[Fraction, GroundAction]] = []
    intervals: list[tuple[Fraction, Fraction, GroundAction]] = []
    for step in plan.steps:
        inst = model.action(step.name, step.args, step.duration)
        if isinstance(inst, DurativeSplit):
            end = step.time + step.duration
            actions.append((step.time, inst.start))
            actions.append((end, inst.end))
            intervals.append((step.time, end, inst.invariant))
        else:
            actions.append((step.time, inst))
    tils = tuple((tl.time, model.til_action(tl)) for tl in model.problem.timed_literals)
    return Schedule(tuple(actions), tuple(intervals), tils)


def group_times(times: Iterable[Fraction], tolerance: Fraction = Fraction(0)) -> dict[Fraction, Fraction]:
    """Map each time to the time of its happening.

    Times are merged greedily: a time joins the current group when it is
    within ``tolerance`` of the group's first (earliest) time.
    """
    out: dict[Fraction, Fraction] = {}
    current: Fraction | None = None
    for t in sorted(set(times)):
        if current is None or t - current > tolerance:
            current = t
        out[t] = current
    return out


def build_happenings(
    actions: Sequence[tuple[Fraction, GroundAction]],
    tils: Sequence[tuple[Fraction, GroundAction]] = (),
    intervals: Sequence[tuple[Fraction, Fraction, GroundAction]] = (),
    tolerance: Fraction = Fraction(0),
) -> tuple[list[Happening], list[Interval], Fraction]:
    """Group timed simple actions into happenings.

    Returns the happenings in time order, the durative intervals mapped to
    happening times, and ``t_end`` (time of the last plan-action happening,
    0 without plan actions). Every durative step's invariant guard joins each
    happening strictly inside its interval.
    """
    timed = list(actions) + list(tils)
    grouped = group_times((t for t, _ in timed), tolerance)
    members: dict[Fraction, list[GroundAction]] = {}
    for t, a in timed:
        members.setdefault(grouped[t], []).append(a)

    mapped = [Interval(grouped[s], grouped[e], inv) for s, e, inv in intervals]
    for iv in mapped:
        for t in members:
            if iv.start < t < iv.end:
                members[t].append(iv.invariant)

    happenings = [Happening(t, tuple(members[t])) for t in sorted(members)]
    t_end = max((grouped[t] for t, _ in actions), default=Fraction(0))
    return happenings, mapped, t_end


def plan_happenings(plan: Plan, model: GroundModel, tolerance: Fraction = Fraction(0)):
    sched = schedule(plan, model)
    return build_happenings(sched.actions, sched.tils, sched.intervals, tolerance)
