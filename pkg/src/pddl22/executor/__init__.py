"""Plan execution: happenings, mutex, state transitions and verdicts."""

from .evaluate import UndefinedValue, compare, eval_expr, evaluate
from .execute import (
    check_invariants,
    evaluate_metric,
    execute_happening,
    initial_state,
    invariant_failure,
    makespan_and_goal,
    run_happenings,
    validate,
)
from .happenings import Schedule, build_happenings, group_times, plan_happenings, schedule
from .mutex import mutex, mutex_reason
from .trace import delta_record, rational, state_record, trace_lines, trace_records
from .types import (
    ACTIVITY_MISMATCH,
    GOAL_UNACHIEVED,
    INVARIANT_VIOLATED,
    MUTEX_PAIR,
    PRECONDITION_FALSE,
    REASONS,
    UNDEFINED_NUMERIC,
    Failure,
    Happening,
    Interval,
    State,
    Trace,
    UndefinedHappening,
    Verdict,
)

__all__ = [
    "ACTIVITY_MISMATCH", "GOAL_UNACHIEVED", "INVARIANT_VIOLATED", "MUTEX_PAIR",
    "PRECONDITION_FALSE", "REASONS", "UNDEFINED_NUMERIC",
    "Failure", "Happening", "Interval", "Schedule", "State", "Trace", "UndefinedHappening",
    "UndefinedValue", "Verdict",
    "build_happenings", "check_invariants", "compare", "delta_record", "eval_expr", "evaluate",
    "evaluate_metric", "execute_happening", "group_times", "initial_state", "invariant_failure",
    "makespan_and_goal", "mutex", "mutex_reason", "plan_happenings", "rational", "run_happenings",
    "schedule", "state_record", "trace_lines", "trace_records", "validate",
]
