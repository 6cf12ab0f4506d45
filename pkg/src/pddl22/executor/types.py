"""States, happenings, traces and verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..closure import ClosedState
from ..model.grounding import GroundAction
from ..syntax.ast import Fact, Fluent, Formula
from .evaluate import evaluate

PRECONDITION_FALSE = "precondition-false"
MUTEX_PAIR = "mutex-pair"
ACTIVITY_MISMATCH = "activity-mismatch"
UNDEFINED_NUMERIC = "undefined-numeric"
INVARIANT_VIOLATED = "invariant-violated"
GOAL_UNACHIEVED = "goal-unachieved"

REASONS = (
    PRECONDITION_FALSE,
    MUTEX_PAIR,
    ACTIVITY_MISMATCH,
    UNDEFINED_NUMERIC,
    INVARIANT_VIOLATED,
    GOAL_UNACHIEVED,
)


@dataclass(frozen=True)
class State:
    """Basic facts and fluent values at a time point; ``derived`` caches their closure."""

    time: Fraction
    facts: frozenset[Fact]
    values: Mapping[Fluent, Fraction] = field(default_factory=dict)
    derived: frozenset[Fact] = frozenset()

    @property
    def closed(self) -> ClosedState:
        return ClosedState(self.facts, self.derived)

    def holds(self, formula: Formula) -> bool:
        return evaluate(formula, self.closed, self.values)


@dataclass(frozen=True)
class Happening:
    time: Fraction
    members: tuple[GroundAction, ...]

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.members]


@dataclass(frozen=True)
class Interval:
    """Occupancy of one durative plan step, in happening times."""

    start: Fraction
    end: Fraction
    invariant: GroundAction


@dataclass
class Trace:
    initial: State
    steps: list[tuple[Happening, State]] = field(default_factory=list)
    t_end: Fraction = Fraction(0)

    @property
    def final(self) -> State:
        return self.steps[-1][1] if self.steps else self.initial

    def state_at(self, time: Fraction) -> State:
        """State holding just after all happenings at or before ``time``."""
        current = self.initial
        for h, s in self.steps:
            if h.time > time:
                break
            current = s
        return current


@dataclass(frozen=True)
class Failure:
    time: Fraction
    reason: str
    message: str
    actions: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.reason}@{self.time}: {self.message}"


@dataclass
class Verdict:
    valid: bool
    trace: Trace
    failure: Failure | None = None
    makespan: Fraction | None = None
    metric_value: Fraction | None = None

    @property
    def t_end(self) -> Fraction:
        return self.trace.t_end


class UndefinedHappening(Exception):
    """The result of executing a happening is undefined."""

    def __init__(self, reason: str, message: str, actions: tuple[str, ...] = ()):
        super().__init__(message)
        self.reason = reason
        self.message = message
        self.actions = actions
