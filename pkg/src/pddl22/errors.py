"""Exception hierarchy shared by every stage of the toolkit."""

from __future__ import annotations


class PddlError(Exception):
    """Base class for problems with the input files themselves."""


class ParseError(PddlError):
    """Lexical or grammatical error with a source location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            where = f"{line}:{column}" if column is not None else f"{line}"
            super().__init__(f"{where}: {message}")
        else:
            super().__init__(message)


class SemanticError(PddlError):
    """Input is grammatical but violates a static rule (undeclared names, bad times, ...)."""


class RestrictionError(SemanticError):
    """Violation of one of the three derived-predicate restrictions.

    ``restriction`` is 1 (derived predicate affected by an effect or timed
    literal), 2 (rule head variables not distinct, or not matching the free
    variables of the body) or 3 (derived predicate negated in the NNF of a
    rule body).
    """

    def __init__(self, restriction: int, message: str):
        self.restriction = restriction
        self.message = message
        super().__init__(f"restriction {restriction}: {message}")
