"""Grounding, rule restrictions, NNF and the fact dependency graph."""

from .graph import DependencyGraph, build_dependency_graph, dpre
from .grounding import (
    END,
    INSTANT,
    INVARIANT,
    START,
    TIL,
    DurativeSplit,
    GroundAction,
    GroundModel,
    GroundRule,
    ObjectIndex,
    dump_model,
    ground,
    ground_effects,
    ground_formula,
    ground_rules,
    make_action,
    with_dpre,
)
from .nnf import atoms, free_variables, is_nnf, to_nnf
from .restrictions import (
    Classification,
    Violation,
    check_restrictions,
    classify_predicates,
    restriction_violations,
    validate_rules,
)

__all__ = [
    "END", "INSTANT", "INVARIANT", "START", "TIL",
    "Classification", "DependencyGraph", "DurativeSplit", "GroundAction", "GroundModel",
    "GroundRule", "ObjectIndex", "Violation",
    "atoms", "build_dependency_graph", "check_restrictions", "classify_predicates",
    "dpre", "dump_model", "free_variables", "ground", "ground_effects", "ground_formula",
    "ground_rules", "is_nnf", "make_action", "restriction_violations", "to_nnf",
    "validate_rules", "with_dpre",
]
