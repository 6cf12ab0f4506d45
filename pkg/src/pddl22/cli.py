"""Command-line front end: ``pddl22 validate <domain> <problem> [<plan>]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from .errors import ParseError, PddlError, RestrictionError
from .executor import rational, trace_records, validate
from .model import GroundModel, restriction_violations
from .syntax import parse_domain, parse_plan, parse_problem

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    domain: Path
    problem: Path
    plan: Path | None = None
    verbose: bool = False
    json: bool = False
    tolerance: Fraction = Fraction(0)
    check_only: bool = False


class InputError(Exception):
    """Bad input files; carries everything needed for the error report."""

    def __init__(self, message: str, *, file: str | None = None, kind: str = "error",
                 restrictions: Sequence[int] = ()):
        super().__init__(message)
        self.message = message
        self.file = file
        self.kind = kind
        self.restrictions = list(restrictions)


def _tolerance(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("tolerance must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pddl22", description="PDDL2.2 plan validator")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check a domain/problem and optionally validate a plan")
    v.add_argument("domain", type=Path)
    v.add_argument("problem", type=Path)
    v.add_argument("plan", type=Path, nargs="?", help="plan file; standard input if omitted")
    v.add_argument("--json", action="store_true", help="print a single JSON object")
    v.add_argument("--verbose", "-v", action="store_true", help="include the per-happening trace")
    v.add_argument("--tolerance", type=_tolerance, default=Fraction(0), metavar="R",
                   help="merge happening times differing by at most R (default 0)")
    v.add_argument("--check-only", action="store_true",
                   help="parse and ground the domain and problem, without a plan")
    return parser


def _read(path: Path | None, stdin: TextIO) -> tuple[str, str]:
    if path is None:
        return "<stdin>", stdin.read()
    try:
        return str(path), path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}", file=str(path), kind="io") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"cannot decode {path}: {exc}", file=str(path), kind="io") from None


def _wrap(name: str, exc: PddlError) -> InputError:
    if isinstance(exc, RestrictionError):
        return InputError(str(exc), file=name, kind="restriction", restrictions=[exc.restriction])
    kind = "parse" if isinstance(exc, ParseError) else "semantic"
    return InputError(str(exc), file=name, kind=kind)


def evaluate_run(config: RunConfig, stdin: TextIO) -> dict:
    """Do the work for one invocation and return the report (without timing)."""
    timing: dict[str, float] = {}
    report: dict = {
        "domain": str(config.domain),
        "problem": str(config.problem),
        "plan": None if config.check_only else (str(config.plan) if config.plan else "<stdin>"),
    }

    clock = time.perf_counter()
    dname, dtext = _read(config.domain, stdin)
    pname, ptext = _read(config.problem, stdin)
    try:
        domain = parse_domain(dtext)
    except PddlError as exc:
        raise _wrap(dname, exc) from None
    try:
        problem = parse_problem(ptext, domain)
    except PddlError as exc:
        raise _wrap(pname, exc) from None
    timing["parse"] = time.perf_counter() - clock

    clock = time.perf_counter()
    violations = restriction_violations(domain, problem)
    if violations:
        raise InputError(
            "; ".join(str(v) for v in violations), file=dname, kind="restriction",
            restrictions=sorted({v.restriction for v in violations}),
        )
    try:
        model = GroundModel(domain, problem)
        if config.check_only:
            actions = model.ground_actions()
    except PddlError as exc:
        raise _wrap(dname, exc) from None
    timing["ground"] = time.perf_counter() - clock

    if config.check_only:
        report.update(
            status="ok",
            valid=None,
            summary={
                "actions": len(actions),
                "rules": len(model.rules),
                "derived_predicates": sorted(model.classification.derived),
                "timed_literals": len(problem.timed_literals),
            },
        )
        report["timing"] = timing
        return report

    clock = time.perf_counter()
    plan_name, plan_text = _read(config.plan, stdin)
    try:
        plan = parse_plan(plan_text, domain, problem)
    except PddlError as exc:
        raise _wrap(plan_name, exc) from None
    timing["parse"] += time.perf_counter() - clock

    clock = time.perf_counter()
    verdict = validate(domain, problem, plan, tolerance=config.tolerance, model=model)
    timing["validate"] = time.perf_counter() - clock

    failure = verdict.failure
    report.update(
        status="valid" if verdict.valid else "invalid",
        valid=verdict.valid,
        failure=None if failure is None else {
            "time": rational(failure.time),
            "reason": failure.reason,
            "message": failure.message,
            "actions": list(failure.actions),
        },
        t_end=rational(verdict.t_end),
        makespan=rational(verdict.makespan),
        metric=None if problem.metric is None else {
            "direction": problem.metric.direction,
            "value": rational(verdict.metric_value),
        },
        happenings=len(verdict.trace.steps),
    )
    if config.verbose:
        report["trace"] = list(trace_records(verdict.trace))
    report["timing"] = timing
    return report


def error_report(config: RunConfig, err: InputError) -> dict:
    return {
        "domain": str(config.domain),
        "problem": str(config.problem),
        "plan": None if config.check_only else (str(config.plan) if config.plan else "<stdin>"),
        "status": "error",
        "valid": None,
        "error": {
            "kind": err.kind,
            "file": err.file,
            "message": err.message,
            "restrictions": err.restrictions,
        },
    }


def _timing_json(timing: dict[str, float]) -> dict[str, float]:
    return {f"{k}_seconds": round(v, 6) for k, v in timing.items()}


def render_json(report: dict) -> str:
    out = dict(report)
    if "timing" in out:
        out["timing"] = _timing_json(out["timing"])
    return json.dumps(out, sort_keys=True, indent=2)


def render_text(report: dict) -> str:
    lines = [f"domain: {report['domain']}", f"problem: {report['problem']}"]
    if report.get("plan") is not None:
        lines.append(f"plan: {report['plan']}")
    status = report["status"]
    if status == "error":
        err = report["error"]
        lines.append("status: error")
        lines.append(f"error: {err['kind']} in {err['file']}: {err['message']}")
        if err["restrictions"]:
            lines.append("restrictions: " + ", ".join(str(r) for r in err["restrictions"]))
        return "\n".join(lines) + "\n"
    lines.append(f"status: {status}")
    if status == "ok":
        s = report["summary"]
        lines.append(f"ground actions: {s['actions']}")
        lines.append(f"ground rules: {s['rules']}")
        lines.append("derived predicates: " + (", ".join(s["derived_predicates"]) or "none"))
        lines.append(f"timed literals: {s['timed_literals']}")
    else:
        failure = report["failure"]
        if failure is not None:
            lines.append(f"failure: {failure['reason']}@{failure['time']}: {failure['message']}")
            if failure["actions"]:
                lines.append("failing actions: " + " ".join(failure["actions"]))
        lines.append(f"t_end: {report['t_end']}")
        lines.append(f"makespan: {report['makespan'] if report['makespan'] is not None else 'none'}")
        metric = report["metric"]
        if metric is not None:
            value = metric["value"] if metric["value"] is not None else "none"
            lines.append(f"metric ({metric['direction']}): {value}")
        lines.append(f"happenings: {report['happenings']}")
        for rec in report.get("trace", []):
            lines.append(f"  {rec['time']}: {' '.join(rec['actions'])}")
            for key in ("add", "del", "derived_add", "derived_del"):
                if rec[key]:
                    lines.append(f"    {key}: {' '.join(rec[key])}")
            for fluent, value in rec["numeric"].items():
                lines.append(f"    {fluent} := {value}")
    timing = report.get("timing", {})
    if timing:
        lines.append("timing: " + ", ".join(f"{k} {v:.6f}s" for k, v in timing.items()))
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, *, stdin: TextIO | None = None,
        stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    args = build_parser().parse_args(argv)
    config = RunConfig(
        domain=args.domain, problem=args.problem, plan=args.plan, verbose=args.verbose,
        json=args.json, tolerance=args.tolerance, check_only=args.check_only,
    )
    try:
        report = evaluate_run(config, stdin)
        code = EXIT_VALID if report["status"] in ("valid", "ok") else EXIT_INVALID
    except InputError as err:
        report = error_report(config, err)
        code = EXIT_ERROR
        print(f"pddl22: {err.file}: {err.message}", file=stderr)

    stdout.write(render_json(report) + "\n" if config.json else render_text(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
