"""PDDL2.2 parsing, grounding and plan validation with derived predicates and timed initial literals."""

from .closure import ClosedState, closure, closure_oracle, naive_closure
from .errors import ParseError, PddlError, RestrictionError, SemanticError
from .executor import Verdict, execute_happening, mutex, validate
from .model import GroundModel, check_restrictions, ground, to_nnf
from .syntax import parse_domain, parse_plan, parse_problem

__version__ = "0.1.0"

__all__ = [
    "ClosedState", "GroundModel", "ParseError", "PddlError", "RestrictionError", "SemanticError",
    "Verdict", "check_restrictions", "closure", "closure_oracle", "execute_happening", "ground",
    "mutex", "naive_closure", "parse_domain", "parse_plan", "parse_problem", "to_nnf", "validate",
]
