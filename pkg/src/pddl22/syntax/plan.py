"""Reader for IPC-style plan files.

One step per line::

    <time>: (<action> <arg>*) [<duration>]

``<time>`` may be omitted on every line (then steps get times 1..n), and
``[<duration>]`` is given exactly for durative actions. ``;`` starts a comment.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .ast import DurativeActionDef, Domain, Plan, PlanStep, Problem

_NUMBER = r"-?\d+(?:\.\d+)?"
_STEP_RE = re.compile(
    r"""^\s*
    (?:(?P<time>[^:(\[]*?)\s*:\s*)?
    \(\s*(?P<body>[^()]*?)\s*\)
    \s*(?:\[\s*(?P<duration>[^\]]*?)\s*\])?
    \s*$""",
    re.VERBOSE,
)


def _number(text: str, what: str, line: int) -> Fraction:
    if not re.fullmatch(_NUMBER, text):
        raise ParseError(f"malformed {what} {text!r}", line)
    return Fraction(text)


def object_types(domain: Domain, problem: Problem) -> dict[str, str]:
    out = {c.name: c.types[0] for c in domain.constants}
    out.update((o.name, o.types[0]) for o in problem.objects)
    return out


def parse_plan(text: str, domain: Domain, problem: Problem) -> Plan:
    """Parse plan text, checking action names, arity and argument types."""
    objects = object_types(domain, problem)
    raw: list[tuple[Fraction | None, str, tuple[str, ...], Fraction | None, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split(";", 1)[0].strip()
        if not content:
            continue
        m = _STEP_RE.match(content)
        if m is None:
            raise ParseError("expected '<time>: (<action> <args>) [<duration>]'", lineno)
        time = None
        if m.group("time") is not None:
            time = _number(m.group("time"), "time", lineno)
            if time <= 0:
                raise ParseError(f"step time must be greater than 0, got {m.group('time')}", lineno)
        words = m.group("body").lower().split()
        if not words:
            raise ParseError("empty action", lineno)
        name, args = words[0], tuple(words[1:])
        action = domain.action(name)
        if action is None:
            raise ParseError(f"unknown action {name}", lineno)
        if len(args) != len(action.params):
            raise ParseError(f"action {name} expects {len(action.params)} arguments, got {len(args)}", lineno)
        for arg, param in zip(args, action.params):
            if arg not in objects:
                raise ParseError(f"undeclared object {arg}", lineno)
            if not set(domain.supertypes(objects[arg])) & set(param.types):
                raise ParseError(f"object {arg} of type {objects[arg]} does not fit parameter {param.name}", lineno)
        duration = None
        if m.group("duration") is not None:
            duration = _number(m.group("duration"), "duration", lineno)
            if duration <= 0:
                raise ParseError(f"duration must be greater than 0, got {m.group('duration')}", lineno)
        durative = isinstance(action, DurativeActionDef)
        if durative and duration is None:
            raise ParseError(f"durative action {name} needs a [duration]", lineno)
        if not durative and duration is not None:
            raise ParseError(f"action {name} is not durative but has a duration", lineno)
        raw.append((time, name, args, duration, lineno))

    timed = [r[0] is not None for r in raw]
    if any(timed) and not all(timed):
        bad = raw[timed.index(False)] if not all(timed) else raw[0]
        raise ParseError("either every step has a time or none does", bad[4])
    explicit = bool(raw) and all(timed)
    steps = tuple(
        PlanStep(t if explicit else Fraction(i), n, a, d, ln)
        for i, (t, n, a, d, ln) in enumerate(raw, start=1)
    )
    return Plan(steps, explicit_times=explicit or not raw)
