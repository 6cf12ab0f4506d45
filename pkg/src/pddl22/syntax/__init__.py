"""Lexing and parsing of PDDL2.2 domains, problems and plans."""

from .ast import Domain, Plan, PlanStep, Problem
from .lexer import Kind, Token, tokenize
from .parser import parse_domain, parse_problem, read_sexprs
from .plan import parse_plan
from .printer import domain_to_pddl, plan_to_text, problem_to_pddl

__all__ = [
    "Domain",
    "Kind",
    "Plan",
    "PlanStep",
    "Problem",
    "Token",
    "domain_to_pddl",
    "parse_domain",
    "parse_plan",
    "parse_problem",
    "plan_to_text",
    "problem_to_pddl",
    "read_sexprs",
    "tokenize",
]
