from __future__ import annotations

from pathlib import Path

import pytest

from pddl22.syntax import parse_domain, parse_plan, parse_problem

FIXTURES = Path(__file__).parent / "fixtures"


def load(domain: str, problem: str, plan: str | None = None):
    """Parse fixture files given relative to tests/fixtures."""
    d = parse_domain((FIXTURES / domain).read_text())
    p = parse_problem((FIXTURES / problem).read_text(), d)
    if plan is None:
        return d, p
    text = (FIXTURES / plan).read_text() if plan.endswith(".plan") else plan
    return d, p, parse_plan(text, d, p)


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES
