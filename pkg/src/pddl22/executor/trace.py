"""Line-oriented trace records: one JSON object per happening."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterator

from ..syntax.printer import number
from .types import State, Trace


def rational(value: Fraction | None) -> str | None:
    """Exact text for a rational: decimal when finite, else ``n/d``."""
    return None if value is None else number(Fraction(value))


def _facts(items) -> list[str]:
    return sorted(str(f) for f in items)


def state_record(state: State) -> dict:
    return {
        "time": rational(state.time),
        "facts": _facts(state.facts),
        "derived": _facts(state.derived),
        "values": {str(f): rational(v) for f, v in sorted(state.values.items(), key=lambda kv: str(kv[0]))},
    }


def delta_record(before: State, after: State, actions: list[str]) -> dict:
    changed = {
        str(f): rational(v)
        for f, v in after.values.items()
        if before.values.get(f) != v
    }
    return {
        "time": rational(after.time),
        "actions": sorted(actions),
        "add": _facts(after.facts - before.facts),
        "del": _facts(before.facts - after.facts),
        "derived_add": _facts(after.derived - before.derived),
        "derived_del": _facts(before.derived - after.derived),
        "numeric": dict(sorted(changed.items())),
    }


def trace_records(trace: Trace) -> Iterator[dict]:
    prev = trace.initial
    for h, state in trace.steps:
        yield delta_record(prev, state, h.labels)
        prev = state


def trace_lines(trace: Trace) -> list[str]:
    """Deterministic JSON lines, one per executed happening."""
    return [json.dumps(r, sort_keys=True) for r in trace_records(trace)]
