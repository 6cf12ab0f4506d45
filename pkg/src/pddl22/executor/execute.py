"""Happening execution, invariant checks, makespan and plan validation."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

from ..closure import ClosedState, closure
from ..model.grounding import INVARIANT, GroundAction, GroundModel
from ..syntax.ast import (
    Assign,
    Atom,
    Domain,
    Fact,
    Fluent,
    Formula,
    Metric,
    Not,
    Plan,
    Problem,
    When,
)
from .evaluate import UndefinedValue, compare, eval_expr, evaluate
from .happenings import plan_happenings
from .mutex import mutex_reason
from .types import (
    ACTIVITY_MISMATCH,
    GOAL_UNACHIEVED,
    INVARIANT_VIOLATED,
    MUTEX_PAIR,
    PRECONDITION_FALSE,
    UNDEFINED_NUMERIC,
    Failure,
    Happening,
    Interval,
    State,
    Trace,
    UndefinedHappening,
    Verdict,
)


def initial_state(model: GroundModel) -> State:
    problem = model.problem
    values = dict(problem.numeric_init)
    return _closed_state(Fraction(0), problem.init, values, model.rules)


def _closed_state(time: Fraction, facts, values, rules) -> State:
    facts = frozenset(facts)
    try:
        closed = closure(facts, rules, values)
    except UndefinedValue as exc:
        raise UndefinedHappening(UNDEFINED_NUMERIC, f"rule body: {exc}") from None
    return State(time, facts, values, closed.derived)


def _duration_ok(action: GroundAction, values: Mapping[Fluent, Fraction]) -> bool:
    for c in action.duration_constraints:
        if not compare(c.op, action.duration, eval_expr(c.expr, values)):
            return False
    return True


def _active_effects(effects, closed: ClosedState, values) -> list:
    out = []
    for e in effects:
        if isinstance(e, When):
            if evaluate(e.condition, closed, values):
                out.extend(_active_effects(e.effects, closed, values))
        else:
            out.append(e)
    return out


def _numeric_updates(action: GroundAction, effects, x: Mapping[Fluent, Fraction]) -> dict[Fluent, Fraction]:
    """New values written by one action, all right-hand sides read from ``x``."""
    assigned: dict[Fluent, Fraction] = {}
    deltas: dict[Fluent, Fraction] = {}
    scaled: dict[Fluent, list[tuple[str, Fraction]]] = {}
    for e in effects:
        if not isinstance(e, Assign):
            continue
        v = eval_expr(e.expr, x)
        if e.op == "assign":
            if e.fluent in assigned or e.fluent in deltas or e.fluent in scaled:
                raise UndefinedHappening(ACTIVITY_MISMATCH, f"{action.label} assigns {e.fluent} twice", (action.label,))
            assigned[e.fluent] = v
        elif e.op in ("increase", "decrease"):
            if e.fluent in assigned or e.fluent in scaled:
                raise UndefinedHappening(ACTIVITY_MISMATCH, f"{action.label} assigns {e.fluent} twice", (action.label,))
            deltas[e.fluent] = deltas.get(e.fluent, Fraction(0)) + (v if e.op == "increase" else -v)
        else:
            if e.fluent in assigned or e.fluent in deltas or e.fluent in scaled:
                raise UndefinedHappening(ACTIVITY_MISMATCH, f"{action.label} assigns {e.fluent} twice", (action.label,))
            scaled[e.fluent] = [(e.op, v)]
    out = dict(assigned)
    for f, d in deltas.items():
        out[f] = eval_expr(f, x) + d
    for f, ((op, v),) in scaled.items():
        old = eval_expr(f, x)
        if op == "scale-up":
            out[f] = old * v
        elif v == 0:
            raise UndefinedValue(f"scale-down of {f} by zero")
        else:
            out[f] = old / v
    return out


def execute_happening(state: State, happening: Happening, rules: Sequence = (),
                      *, order: Sequence[int] | None = None) -> State:
    """Successor state of ``state`` after ``happening``.

    Every member's precondition must hold in the (closed) current state and
    no two acting members may be mutex; otherwise :class:`UndefinedHappening`
    is raised. Deletes are applied before adds, fluent updates are composed
    member by member (``order`` permutes that composition), and the derived
    closure of the new basic facts is computed last.
    """
    closed = state.closed
    values = state.values
    t = happening.time

    for a in happening.members:
        try:
            ok = evaluate(a.precondition, closed, values)
            if ok and a.duration_constraints:
                if not _duration_ok(a, values):
                    raise UndefinedHappening(
                        PRECONDITION_FALSE, f"duration {a.duration} of {a.label} violates its duration constraint",
                        (a.label,))
        except UndefinedValue as exc:
            raise UndefinedHappening(UNDEFINED_NUMERIC, f"{a.label}: {exc}", (a.label,)) from None
        if not ok:
            if a.origin == INVARIANT:
                raise UndefinedHappening(INVARIANT_VIOLATED, f"invariant of {a.label} is false", (a.label,))
            raise UndefinedHappening(PRECONDITION_FALSE, f"precondition of {a.label} is false", (a.label,))

    acting = [a for a in happening.members if a.origin != INVARIANT]
    for a, b in itertools.combinations(acting, 2):
        why = mutex_reason(a, b)
        if why is not None:
            raise UndefinedHappening(MUTEX_PAIR, why, (a.label, b.label))

    if order is not None:
        acting = [acting[i] for i in order]
    adds: set[Fact] = set()
    dels: set[Fact] = set()
    x = dict(values)
    try:
        for a in acting:
            effects = _active_effects(a.effects, closed, values)
            for e in effects:
                if isinstance(e, Atom):
                    adds.add(e)
                elif isinstance(e, Not):
                    dels.add(e.arg)
            x.update(_numeric_updates(a, effects, x))
    except UndefinedValue as exc:
        raise UndefinedHappening(UNDEFINED_NUMERIC, str(exc), tuple(a.label for a in acting)) from None

    facts = (state.facts - dels) | adds
    return _closed_state(t, facts, x, rules)


def _intervals_covering(time: Fraction, intervals: Sequence[Interval]):
    return [iv for iv in intervals if iv.start <= time < iv.end]


def invariant_failure(state: State, intervals: Sequence[Interval]) -> Failure | None:
    """Failure if some durative step active just after ``state.time`` has a false invariant."""
    for iv in _intervals_covering(state.time, intervals):
        try:
            ok = state.holds(iv.invariant.precondition)
        except UndefinedValue as exc:
            return Failure(state.time, UNDEFINED_NUMERIC, f"invariant of {iv.invariant.label}: {exc}",
                           (iv.invariant.label,))
        if not ok:
            return Failure(state.time, INVARIANT_VIOLATED,
                           f"invariant of {iv.invariant.label} over [{iv.start}, {iv.end}] is false",
                           (iv.invariant.label,))
    return None


def check_invariants(trace: Trace, intervals: Sequence[Interval]) -> Failure | None:
    """Earliest invariant violation: each over-all condition must hold after its
    start happening and after every happening strictly inside its interval."""
    for _, state in trace.steps:
        failure = invariant_failure(state, intervals)
        if failure is not None:
            return failure
    return None


def _goal_states(trace: Trace) -> list[State]:
    """State at t_end followed by the states after every later happening."""
    states = [trace.state_at(trace.t_end)]
    states.extend(s for h, s in trace.steps if h.time > trace.t_end)
    return states


def makespan_and_goal(trace: Trace, goal: Formula) -> tuple[bool, Fraction | None]:
    """Validity and makespan of an executed trace.

    Valid when the goal holds in the final state. The makespan is the
    earliest time at or after t_end from which the goal holds after every
    remaining happening: t_end itself if the goal already holds there,
    otherwise the time of the happening that finally establishes it.
    Raises :class:`UndefinedValue` if the goal cannot be evaluated in the
    final state.
    """
    states = _goal_states(trace)
    if not states[-1].holds(goal):
        return False, None
    makespan = trace.t_end
    for prev, nxt in zip(reversed(states[:-1]), reversed(states[1:])):
        try:
            ok = prev.holds(goal)
        except UndefinedValue:
            ok = False
        if not ok:
            makespan = nxt.time
            break
    return True, makespan


def evaluate_metric(metric: Metric | None, makespan: Fraction, values: Mapping[Fluent, Fraction]) -> Fraction | None:
    """Value of the metric expression with total-time bound to ``makespan``."""
    if metric is None:
        return None
    return eval_expr(metric.expr, values, total_time=makespan)


def run_happenings(model: GroundModel, happenings: Sequence[Happening], intervals: Sequence[Interval],
                   t_end: Fraction) -> tuple[Trace, Failure | None]:
    """Execute happenings in order, stopping at the first undefined one or invariant violation."""
    try:
        state = initial_state(model)
    except UndefinedHappening as exc:
        return Trace(State(Fraction(0), model.problem.init), [], t_end), Failure(Fraction(0), exc.reason, exc.message)
    trace = Trace(state, [], t_end)
    for h in happenings:
        try:
            state = execute_happening(state, h, model.rules)
        except UndefinedHappening as exc:
            return trace, Failure(h.time, exc.reason, exc.message, exc.actions)
        trace.steps.append((h, state))
        failure = invariant_failure(state, intervals)
        if failure is not None:
            return trace, failure
    return trace, None


def validate(domain: Domain, problem: Problem, plan: Plan, *, tolerance: Fraction = Fraction(0),
             model: GroundModel | None = None) -> Verdict:
    """Judge ``plan``: executability, invariants, goal, makespan and metric.

    Plan failures end up in :attr:`Verdict.failure`; problems with the
    domain or problem themselves (restriction violations) raise
    :class:`~pddl22.errors.PddlError` from grounding.
    """
    model = model or GroundModel(domain, problem)
    happenings, intervals, t_end = plan_happenings(plan, model, Fraction(tolerance))
    trace, failure = run_happenings(model, happenings, intervals, t_end)
    if failure is not None:
        return Verdict(False, trace, failure)

    try:
        valid, makespan = makespan_and_goal(trace, model.goal)
    except UndefinedValue as exc:
        return Verdict(False, trace, Failure(trace.final.time, UNDEFINED_NUMERIC, f"goal: {exc}"))
    if not valid:
        return Verdict(False, trace, Failure(trace.final.time, GOAL_UNACHIEVED, "goal is false in the final state"))

    try:
        metric = evaluate_metric(problem.metric, makespan, trace.final.values)
    except UndefinedValue as exc:
        return Verdict(False, trace, Failure(trace.final.time, UNDEFINED_NUMERIC, f"metric: {exc}"))
    return Verdict(True, trace, None, makespan, metric)
