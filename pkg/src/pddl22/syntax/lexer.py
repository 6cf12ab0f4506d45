"""Tokenizer for PDDL s-expressions."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError


class Kind(str, enum.Enum):
    LPAREN = "lparen"
    RPAREN = "rparen"
    SYMBOL = "symbol"
    KEYWORD = "keyword"
    VARIABLE = "variable"
    NUMBER = "number"


@dataclass(frozen=True, slots=True)
class Token:
    kind: Kind
    text: str
    line: int
    column: int

    @property
    def value(self) -> Fraction:
        """Exact value of a number token."""
        if self.kind is not Kind.NUMBER:
            raise TypeError(f"{self.kind.value} token has no numeric value")
        return Fraction(self.text)

    def __str__(self) -> str:
        return self.text


_NAME = r"[a-z][a-z0-9_\-]*"

# Order matters: numbers before the bare "-" operator, names before operators.
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>;[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<variable>\?{_NAME})
  | (?P<keyword>:{_NAME})
  | (?P<number>-?\d+(?:\.\d+)?)(?![a-z_\-.\d])
  | (?P<symbol>{_NAME}|<=|>=|[<>=+\-*/])
    """,
    re.VERBOSE | re.IGNORECASE,
)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, dropping whitespace and ``;`` comments.

    Names, keywords and variables are lowercased. Raises :class:`ParseError`
    at the first character that cannot start a token.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    end = len(text)
    while pos < end:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise ParseError(f"illegal character {text[pos]!r}", line, col)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            lexeme = m.group()
            if kind != "number":
                lexeme = lexeme.lower()
            tokens.append(Token(Kind(kind), lexeme, line, col))
        pos = m.end()
    return tokens
