"""Recursive-descent parser for PDDL2.2 domain and problem files.

The token stream is first folded into nested :class:`SList` nodes so that
every production can report the location of the list it was looking at.
Declarations (requirements, types, constants, predicates, functions) are
read before structures, so section order inside ``define`` is not enforced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..errors import ParseError, RestrictionError, SemanticError
from .ast import (
    ASSIGN_OPS,
    TRUE,
    ActionDef,
    And,
    Assign,
    Atom,
    BinOp,
    Compare,
    DerivedDef,
    Domain,
    DurationConstraint,
    DurationRef,
    DurativeActionDef,
    Effect,
    Exists,
    Expr,
    Fluent,
    Forall,
    ForallEffect,
    Formula,
    FunctionDef,
    Imply,
    Metric,
    Neg,
    Not,
    Num,
    Or,
    PredicateDef,
    Problem,
    TimedCondition,
    TimedEffect,
    TimedLiteral,
    TotalTime,
    TypedName,
    When,
)
from .lexer import Kind, Token, tokenize

REQUIREMENTS = frozenset(
    {
        ":strips",
        ":typing",
        ":negative-preconditions",
        ":disjunctive-preconditions",
        ":equality",
        ":existential-preconditions",
        ":universal-preconditions",
        ":quantified-preconditions",
        ":conditional-effects",
        ":fluents",
        ":adl",
        ":durative-actions",
        ":duration-inequalities",
        ":continuous-effects",
        ":derived-predicates",
        ":timed-initial-literals",
    }
)

_IMPLIED = {
    ":adl": (
        ":strips",
        ":typing",
        ":negative-preconditions",
        ":disjunctive-preconditions",
        ":equality",
        ":quantified-preconditions",
        ":conditional-effects",
    ),
    ":quantified-preconditions": (":existential-preconditions", ":universal-preconditions"),
    ":timed-initial-literals": (":durative-actions",),
}

_COMPARATORS = ("<", "<=", ">", ">=", "=")
_ARITHMETIC = ("+", "-", "*", "/")


@dataclass(slots=True)
class SList:
    items: list["Node"]
    line: int
    column: int

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, index):
        return self.items[index]


Node = Union[SList, Token]


def read_sexprs(tokens: Sequence[Token]) -> list[Node]:
    """Fold a flat token list into nested lists."""
    stack: list[SList] = []
    top: list[Node] = []
    for tok in tokens:
        if tok.kind is Kind.LPAREN:
            stack.append(SList([], tok.line, tok.column))
        elif tok.kind is Kind.RPAREN:
            if not stack:
                raise ParseError("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            (stack[-1].items if stack else top).append(done)
        else:
            (stack[-1].items if stack else top).append(tok)
    if stack:
        raise ParseError("unclosed '(' opened here", stack[-1].line, stack[-1].column)
    return top


def _loc(node: Node) -> tuple[int, int]:
    return node.line, node.column


def _fail(node: Node, message: str) -> ParseError:
    return ParseError(message, *_loc(node))


def _describe(node: Node) -> str:
    if isinstance(node, Token):
        return f"{node.kind.value} {node.text!r}"
    return "a list"


def _head(node: Node) -> str | None:
    """Text of the first token of a list, if it is a token."""
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Token):
        return node.items[0].text
    return None


def _expect_list(node: Node, production: str) -> SList:
    if not isinstance(node, SList):
        raise _fail(node, f"expected {production}, got {_describe(node)}")
    return node


def _expect_token(node: Node, production: str, *kinds: Kind) -> Token:
    if not isinstance(node, Token) or (kinds and node.kind not in kinds):
        raise _fail(node, f"expected {production}, got {_describe(node)}")
    return node


def _name(node: Node, production: str = "<name>") -> str:
    return _expect_token(node, production, Kind.SYMBOL).text


def _as_tokens(source: str | Sequence[Token]) -> list[Token]:
    return tokenize(source) if isinstance(source, str) else list(source)


def expand_requirements(flags: Iterable[str]) -> frozenset[str]:
    out = set(flags)
    todo = list(out)
    while todo:
        for implied in _IMPLIED.get(todo.pop(), ()):
            if implied not in out:
                out.add(implied)
                todo.append(implied)
    return frozenset(out)


def _parse_requirements(node: SList) -> frozenset[str]:
    flags = []
    for item in node.items[1:]:
        tok = _expect_token(item, "<require-key>", Kind.KEYWORD)
        if tok.text not in REQUIREMENTS:
            raise _fail(tok, f"unknown requirement flag {tok.text}")
        flags.append(tok.text)
    return expand_requirements(flags)


def parse_typed_list(items: Sequence[Node], kind: Kind, production: str) -> list[TypedName]:
    """Parse ``x y - t z - (either a b) w`` style lists."""
    out: list[TypedName] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, Token) and item.kind is Kind.SYMBOL and item.text == "-":
            if not pending:
                raise _fail(item, f"expected {production} before '-'")
            if i + 1 >= len(items):
                raise _fail(item, "expected <type> after '-'")
            types = _parse_type(items[i + 1])
            out.extend(TypedName(n, types) for n in pending)
            pending = []
            i += 2
            continue
        pending.append(_expect_token(item, production, kind).text)
        i += 1
    out.extend(TypedName(n) for n in pending)
    return out


def _parse_type(node: Node) -> tuple[str, ...]:
    if isinstance(node, SList):
        if _head(node) != "either" or len(node) < 2:
            raise _fail(node, "expected <type> or (either <primitive-type>+)")
        return tuple(_name(t, "<primitive-type>") for t in node.items[1:])
    return (_name(node, "<primitive-type>"),)


class _Scope:
    """Names visible while parsing a formula or effect."""

    def __init__(self, variables: Iterable[str] = (), *, checked: bool = True,
                 duration: bool = False, total_time: bool = False):
        self.variables = frozenset(variables)
        self.checked = checked
        self.duration = duration
        self.total_time = total_time

    def extend(self, names: Iterable[str]) -> "_Scope":
        return _Scope(self.variables | set(names), checked=self.checked,
                      duration=self.duration, total_time=self.total_time)


class _Grammar:
    """Formula, expression and effect productions shared by domain and problem parsing."""

    def __init__(self, predicates: dict[str, PredicateDef], functions: dict[str, FunctionDef],
                 objects: set[str], types: set[str]):
        self.predicates = predicates
        self.functions = functions
        self.objects = objects
        self.types = types

    # -- terms and typed lists

    def term(self, node: Node, scope: _Scope) -> str:
        tok = _expect_token(node, "<term>", Kind.SYMBOL, Kind.VARIABLE)
        if tok.kind is Kind.VARIABLE:
            if scope.checked and tok.text not in scope.variables:
                raise _fail(tok, f"unbound variable {tok.text}")
        elif tok.text not in self.objects:
            raise _fail(tok, f"undeclared object or constant {tok.text}")
        return tok.text

    def check_types(self, typed: Iterable[TypedName], node: Node) -> None:
        for t in typed:
            for ty in t.types:
                if ty not in self.types:
                    raise _fail(node, f"undeclared type {ty}")

    def variables(self, node: Node) -> tuple[TypedName, ...]:
        lst = _expect_list(node, "(<typed list (variable)>)")
        params = parse_typed_list(lst.items, Kind.VARIABLE, "<variable>")
        self.check_types(params, lst)
        names = [p.name for p in params]
        if len(set(names)) != len(names):
            raise _fail(lst, "duplicate variable in parameter list")
        return tuple(params)

    # -- formulas

    def atom(self, node: SList, scope: _Scope) -> Atom:
        name = _name(node.items[0], "<predicate>")
        args = tuple(self.term(a, scope) for a in node.items[1:])
        if name == "=":
            if len(args) != 2:
                raise _fail(node, "equality takes two terms")
            return Atom("=", args)
        pred = self.predicates.get(name)
        if pred is None:
            raise _fail(node, f"undeclared predicate {name}")
        if len(pred.params) != len(args):
            raise _fail(node, f"predicate {name} expects {len(pred.params)} arguments, got {len(args)}")
        return Atom(name, args)

    def gd(self, node: Node, scope: _Scope) -> Formula:
        lst = _expect_list(node, "<GD>")
        if not lst.items:
            return TRUE
        head = _head(lst)
        if head is None:
            raise _fail(lst, "expected <GD>, got a list starting with a list")
        rest = lst.items[1:]
        if head == "and":
            return And(tuple(self.gd(p, scope) for p in rest))
        if head == "or":
            return Or(tuple(self.gd(p, scope) for p in rest))
        if head == "not":
            if len(rest) != 1:
                raise _fail(lst, "expected (not <GD>)")
            return Not(self.gd(rest[0], scope))
        if head == "imply":
            if len(rest) != 2:
                raise _fail(lst, "expected (imply <GD> <GD>)")
            return Imply(self.gd(rest[0], scope), self.gd(rest[1], scope))
        if head in ("exists", "forall"):
            if len(rest) != 2:
                raise _fail(lst, f"expected ({head} (<typed list (variable)>) <GD>)")
            params = self.variables(rest[0])
            body = self.gd(rest[1], scope.extend(p.name for p in params))
            return (Exists if head == "exists" else Forall)(params, body)
        if head in _COMPARATORS:
            if len(rest) != 2:
                raise _fail(lst, f"expected ({head} <f-exp> <f-exp>)")
            if head == "=" and all(self._is_term(r) for r in rest):
                return self.atom(lst, scope)
            return Compare(head, self.fexp(rest[0], scope), self.fexp(rest[1], scope))
        return self.atom(lst, scope)

    @staticmethod
    def _is_term(node: Node) -> bool:
        return (isinstance(node, Token) and node.kind in (Kind.SYMBOL, Kind.VARIABLE)
                and node.text != "?duration")

    # -- numeric expressions

    def fexp(self, node: Node, scope: _Scope) -> Expr:
        if isinstance(node, Token):
            if node.kind is Kind.NUMBER:
                return Num(node.value)
            if node.kind is Kind.VARIABLE and node.text == "?duration" and scope.duration:
                return DurationRef()
            if node.kind is Kind.SYMBOL:
                if node.text == "total-time" and scope.total_time:
                    return TotalTime()
                if node.text in self.functions:
                    return self.f_head(node, scope)
            raise _fail(node, f"expected <f-exp>, got {_describe(node)}")
        head = _head(node)
        if head is None:
            raise _fail(node, "expected <f-exp>")
        rest = node.items[1:]
        if head in _ARITHMETIC:
            if head == "-" and len(rest) == 1:
                return Neg(self.fexp(rest[0], scope))
            if len(rest) < 2 or (head in ("-", "/") and len(rest) != 2):
                raise _fail(node, f"expected ({head} <f-exp> <f-exp>)")
            expr = self.fexp(rest[0], scope)
            for r in rest[1:]:
                expr = BinOp(head, expr, self.fexp(r, scope))
            return expr
        if head == "total-time" and scope.total_time and not rest:
            return TotalTime()
        return self.f_head(node, scope)

    def f_head(self, node: Node, scope: _Scope) -> Fluent:
        if isinstance(node, Token):
            name, args, where = node.text, (), node
        else:
            name = _name(node.items[0], "<function-symbol>")
            args = tuple(self.term(a, scope) for a in node.items[1:])
            where = node
        fn = self.functions.get(name)
        if fn is None:
            raise _fail(where, f"undeclared function {name}")
        if len(fn.params) != len(args):
            raise _fail(where, f"function {name} expects {len(fn.params)} arguments, got {len(args)}")
        return Fluent(name, args)

    # -- effects

    def effect(self, node: Node, scope: _Scope) -> tuple[Effect, ...]:
        lst = _expect_list(node, "<effect>")
        if not lst.items:
            return ()
        head = _head(lst)
        rest = lst.items[1:]
        if head == "and":
            out: list[Effect] = []
            for part in rest:
                out.extend(self.effect(part, scope))
            return tuple(out)
        return (self.c_effect(lst, scope),)

    def c_effect(self, lst: SList, scope: _Scope) -> Effect:
        head = _head(lst)
        rest = lst.items[1:]
        if head == "forall":
            if len(rest) != 2:
                raise _fail(lst, "expected (forall (<typed list (variable)>) <effect>)")
            params = self.variables(rest[0])
            return ForallEffect(params, self.effect(rest[1], scope.extend(p.name for p in params)))
        if head == "when":
            if len(rest) != 2:
                raise _fail(lst, "expected (when <GD> <cond-effect>)")
            return When(self.gd(rest[0], scope), self.effect(rest[1], scope))
        return self.p_effect(lst, scope)

    def p_effect(self, lst: SList, scope: _Scope) -> Effect:
        head = _head(lst)
        rest = lst.items[1:]
        if head == "not":
            if len(rest) != 1:
                raise _fail(lst, "expected (not <atomic formula>)")
            return Not(self.atom(_expect_list(rest[0], "<atomic formula>"), scope))
        if head in ASSIGN_OPS:
            if len(rest) != 2:
                raise _fail(lst, f"expected ({head} <f-head> <f-exp>)")
            return Assign(head, self.f_head(rest[0], scope), self.fexp(rest[1], scope))
        if head is None:
            raise _fail(lst, "expected <effect>")
        if head == "=":
            raise _fail(lst, "equality cannot be an effect")
        return self.atom(lst, scope)


# ----------------------------------------------------------------------------
# Domain


def _declared_objects(typed: Iterable[TypedName], where: Node) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for t in typed:
        if t.name in out and out[t.name] != t.types:
            raise _fail(where, f"object {t.name} declared with conflicting types")
        out[t.name] = t.types
    return out


def _split_define(nodes: list[Node], kind: str) -> tuple[str, SList, list[SList]]:
    if len(nodes) != 1:
        where = nodes[1] if len(nodes) > 1 else None
        if where is None:
            raise ParseError(f"expected (define ({kind} <name>) ...), got empty input")
        raise _fail(where, "expected a single (define ...) form")
    top = _expect_list(nodes[0], "(define ...)")
    if _head(top) != "define" or len(top) < 2:
        raise _fail(top, f"expected (define ({kind} <name>) ...)")
    header = _expect_list(top.items[1], f"({kind} <name>)")
    if _head(header) != kind or len(header) != 2:
        raise _fail(header, f"expected ({kind} <name>)")
    sections = [_expect_list(s, "a section") for s in top.items[2:]]
    for s in sections:
        h = s.items[0] if s.items else s
        _expect_token(h, "a section keyword", Kind.KEYWORD)
    return _name(header.items[1]), top, sections


def parse_domain(source: str | Sequence[Token]) -> Domain:
    """Parse a domain from text or from tokens produced by :func:`tokenize`."""
    name, top, sections = _split_define(read_sexprs(_as_tokens(source)), "domain")

    requirements: frozenset[str] = frozenset({":strips"})
    types: dict[str, str] = {}
    constants: list[TypedName] = []
    predicates: dict[str, PredicateDef] = {}
    functions: dict[str, FunctionDef] = {}
    structure_nodes: list[SList] = []
    seen: set[str] = set()

    for sec in sections:
        key = sec.items[0].text
        if key in (":requirements", ":types", ":constants", ":predicates", ":functions"):
            if key in seen:
                raise _fail(sec, f"duplicate {key} section")
            seen.add(key)
        if key == ":requirements":
            requirements = _parse_requirements(sec)
        elif key == ":types":
            for t in parse_typed_list(sec.items[1:], Kind.SYMBOL, "<name>"):
                if len(t.types) != 1:
                    raise _fail(sec, "either-types are not allowed as supertypes")
                if t.name == "object":
                    raise _fail(sec, "type object cannot be redeclared")
                types[t.name] = t.types[0]
        elif key == ":constants":
            constants = parse_typed_list(sec.items[1:], Kind.SYMBOL, "<name>")
        elif key == ":predicates":
            for p in sec.items[1:]:
                p = _expect_list(p, "<atomic formula skeleton>")
                if not p.items:
                    raise _fail(p, "expected <atomic formula skeleton>")
                pname = _name(p.items[0], "<predicate>")
                if pname in predicates:
                    raise _fail(p, f"duplicate predicate {pname}")
                params = parse_typed_list(p.items[1:], Kind.VARIABLE, "<variable>")
                predicates[pname] = PredicateDef(pname, tuple(params))
        elif key == ":functions":
            items = sec.items[1:]
            i = 0
            while i < len(items):
                f = _expect_list(items[i], "<atomic function skeleton>")
                if not f.items:
                    raise _fail(f, "expected <atomic function skeleton>")
                fname = _name(f.items[0], "<function-symbol>")
                params = parse_typed_list(f.items[1:], Kind.VARIABLE, "<variable>")
                functions[fname] = FunctionDef(fname, tuple(params))
                i += 1
                if i < len(items) and isinstance(items[i], Token) and items[i].text == "-":
                    if i + 1 >= len(items) or _name(items[i + 1], "<function type>") != "number":
                        raise _fail(items[i], "function type must be number")
                    i += 2
        elif key in (":action", ":durative-action", ":derived"):
            structure_nodes.append(sec)
        else:
            raise _fail(sec, f"unknown domain section {key}")

    declared_types = set(types) | set(types.values()) | {"object"}
    for parent in types.values():
        if parent != "object" and parent not in types:
            types.setdefault(parent, "object")
    grammar = _Grammar(predicates, functions, set(_declared_objects(constants, top)), declared_types)
    grammar.check_types(constants, top)
    for p in predicates.values():
        grammar.check_types(p.params, top)
    for f in functions.values():
        grammar.check_types(f.params, top)

    structures = []
    names: set[str] = set()
    for sec in structure_nodes:
        key = sec.items[0].text
        if key == ":derived":
            if ":derived-predicates" not in requirements:
                raise SemanticError(f"{sec.line}:{sec.column}: :derived requires the :derived-predicates requirement")
            structures.append(_parse_derived(sec, grammar))
            continue
        if key == ":durative-action" and ":durative-actions" not in requirements:
            raise SemanticError(f"{sec.line}:{sec.column}: :durative-action requires the :durative-actions requirement")
        act = _parse_action(sec, grammar) if key == ":action" else _parse_durative(sec, grammar)
        if act.name in names:
            raise _fail(sec, f"duplicate action {act.name}")
        names.add(act.name)
        structures.append(act)

    return Domain(
        name=name,
        requirements=requirements,
        types=types,
        constants=tuple(constants),
        predicates=tuple(predicates.values()),
        functions=tuple(functions.values()),
        structures=tuple(structures),
    )


def _keyword_args(sec: SList, allowed: Sequence[str]) -> tuple[str, dict[str, Node]]:
    if len(sec) < 2:
        raise _fail(sec, f"expected ({sec.items[0].text} <name> ...)")
    name = _name(sec.items[1], "<action-symbol>")
    fields: dict[str, Node] = {}
    items = sec.items[2:]
    if len(items) % 2:
        raise _fail(sec, f"odd number of items in {sec.items[0].text} {name}")
    for key, value in zip(items[::2], items[1::2]):
        k = _expect_token(key, "a keyword", Kind.KEYWORD).text
        if k not in allowed:
            raise _fail(key, f"unexpected {k} in {sec.items[0].text} {name}; expected one of {', '.join(allowed)}")
        if k in fields:
            raise _fail(key, f"duplicate {k}")
        fields[k] = value
    return name, fields


def _parse_action(sec: SList, g: _Grammar) -> ActionDef:
    name, f = _keyword_args(sec, (":parameters", ":precondition", ":effect"))
    params = g.variables(f[":parameters"]) if ":parameters" in f else ()
    scope = _Scope(p.name for p in params)
    pre = g.gd(f[":precondition"], scope) if ":precondition" in f else TRUE
    eff = g.effect(f[":effect"], scope) if ":effect" in f else ()
    return ActionDef(name, params, pre, eff)


def _parse_durative(sec: SList, g: _Grammar) -> DurativeActionDef:
    name, f = _keyword_args(sec, (":parameters", ":duration", ":condition", ":effect"))
    params = g.variables(f[":parameters"]) if ":parameters" in f else ()
    scope = _Scope((p.name for p in params), duration=True)
    duration = _duration_constraint(f[":duration"], g, scope) if ":duration" in f else ()
    conds = _da_gd(f[":condition"], g, scope) if ":condition" in f else ()
    effs = _da_effect(f[":effect"], g, scope) if ":effect" in f else ()
    return DurativeActionDef(name, params, duration, conds, effs)


def _duration_constraint(node: Node, g: _Grammar, scope: _Scope) -> tuple[DurationConstraint, ...]:
    lst = _expect_list(node, "<duration-constraint>")
    if not lst.items:
        return ()
    head = _head(lst)
    if head == "and":
        out: list[DurationConstraint] = []
        for part in lst.items[1:]:
            out.extend(_duration_constraint(part, g, scope))
        return tuple(out)
    if head in ("=", "<=", ">=") and len(lst) == 3:
        var = lst.items[1]
        if isinstance(var, Token) and var.text == "?duration":
            return (DurationConstraint(head, g.fexp(lst.items[2], scope)),)
    raise _fail(lst, "expected (= ?duration <f-exp>), (<= ?duration <f-exp>) or (>= ?duration <f-exp>)")


_TIME_SPECS = {("at", "start"): "start", ("at", "end"): "end", ("over", "all"): "all"}


def _time_spec(lst: SList) -> str | None:
    if len(lst) == 3 and all(isinstance(t, Token) for t in lst.items[:2]):
        return _TIME_SPECS.get((lst.items[0].text, lst.items[1].text))
    return None


def _da_gd(node: Node, g: _Grammar, scope: _Scope) -> tuple[TimedCondition, ...]:
    lst = _expect_list(node, "<da-GD>")
    if not lst.items:
        return ()
    head = _head(lst)
    if head == "and":
        out: list[TimedCondition] = []
        for part in lst.items[1:]:
            out.extend(_da_gd(part, g, scope))
        return tuple(out)
    if head == "forall" and len(lst) == 3:
        params = g.variables(lst.items[1])
        inner = _da_gd(lst.items[2], g, scope.extend(p.name for p in params))
        return tuple(TimedCondition(c.when, Forall(params, c.formula)) for c in inner)
    when = _time_spec(lst)
    if when is None:
        raise _fail(lst, "expected <timed-GD>: (at start <GD>), (at end <GD>) or (over all <GD>)")
    return (TimedCondition(when, g.gd(lst.items[2], scope)),)


def _da_effect(node: Node, g: _Grammar, scope: _Scope) -> tuple[TimedEffect, ...]:
    lst = _expect_list(node, "<da-effect>")
    if not lst.items:
        return ()
    head = _head(lst)
    rest = lst.items[1:]
    if head == "and":
        out: list[TimedEffect] = []
        for part in rest:
            out.extend(_da_effect(part, g, scope))
        return tuple(out)
    if head == "forall" and len(rest) == 2:
        params = g.variables(rest[0])
        inner = _da_effect(rest[1], g, scope.extend(p.name for p in params))
        return tuple(TimedEffect(e.when, ForallEffect(params, (e.effect,))) for e in inner)
    if head == "when" and len(rest) == 2:
        cond = _expect_list(rest[0], "<da-GD>")
        conds = _da_gd(cond, g, scope)
        effs = _da_effect(rest[1], g, scope)
        whens = {c.when for c in conds} | {e.when for e in effs}
        if len(whens) > 1 or "all" in whens:
            raise _fail(lst, "conditional effects whose condition and effect are at different times are not supported")
        if not effs:
            return ()
        when = effs[0].when
        condition = conds[0].formula if len(conds) == 1 else And(tuple(c.formula for c in conds))
        return (TimedEffect(when, When(condition, tuple(e.effect for e in effs))),)
    when = _time_spec(lst)
    if when is None or when == "all":
        raise _fail(lst, "expected <timed-effect>: (at start <effect>) or (at end <effect>)")
    return tuple(TimedEffect(when, e) for e in g.effect(lst.items[2], scope))


def _parse_derived(sec: SList, g: _Grammar) -> DerivedDef:
    if len(sec) != 3:
        raise _fail(sec, "expected (:derived <atomic formula(term)> <GD>)")
    head_node = _expect_list(sec.items[1], "<atomic formula(term)>")
    if not head_node.items or _head(head_node) in (None, "=", "and", "or", "not"):
        raise _fail(head_node, "expected <atomic formula(term)>")
    # Variable binding in rules is checked by the restriction checker, not here.
    loose = _Scope(checked=False)
    head = g.atom(head_node, loose)
    body = g.gd(sec.items[2], loose)
    return DerivedDef(head, body)


# ----------------------------------------------------------------------------
# Problem


def parse_problem(source: str | Sequence[Token], domain: Domain) -> Problem:
    """Parse a problem against an already parsed ``domain``."""
    name, top, sections = _split_define(read_sexprs(_as_tokens(source)), "problem")

    by_key: dict[str, SList] = {}
    for sec in sections:
        key = sec.items[0].text
        if key not in (":domain", ":requirements", ":objects", ":init", ":goal", ":metric"):
            raise _fail(sec, f"unknown problem section {key}")
        if key in by_key:
            raise _fail(sec, f"duplicate {key} section")
        by_key[key] = sec

    if ":domain" not in by_key:
        raise _fail(top, "expected (:domain <name>)")
    dsec = by_key[":domain"]
    if len(dsec) != 2:
        raise _fail(dsec, "expected (:domain <name>)")
    domain_name = _name(dsec.items[1])
    if domain_name != domain.name:
        raise SemanticError(f"problem {name} is for domain {domain_name}, not {domain.name}")

    requirements = domain.requirements
    if ":requirements" in by_key:
        requirements = requirements | _parse_requirements(by_key[":requirements"])

    objects = parse_typed_list(by_key[":objects"].items[1:], Kind.SYMBOL, "<name>") if ":objects" in by_key else []
    all_objects = _declared_objects(list(domain.constants) + objects, top)
    declared_types = set(domain.types) | set(domain.types.values()) | {"object"}
    for obj in objects:
        if len(obj.types) != 1:
            raise _fail(by_key[":objects"], f"object {obj.name} must have a single type")

    g = _Grammar({p.name: p for p in domain.predicates}, {f.name: f for f in domain.functions},
                 set(all_objects), declared_types)
    if ":objects" in by_key:
        g.check_types(objects, by_key[":objects"])
    derived = domain.derived_predicates
    closed = _Scope()

    init: set[Atom] = set()
    numeric: dict[Fluent, Fraction] = {}
    timed: list[TimedLiteral] = []
    for el in (by_key[":init"].items[1:] if ":init" in by_key else []):
        el = _expect_list(el, "<init-el>")
        head = _head(el)
        if (head == "at" and len(el) == 3 and isinstance(el.items[1], Token)
                and el.items[1].kind is Kind.NUMBER and isinstance(el.items[2], SList)):
            timed.append(_timed_literal(el, g, closed, requirements, derived))
        elif head == "=" and len(el) == 3 and not g._is_term(el.items[1]):
            fl = g.f_head(el.items[1], closed)
            val = _expect_token(el.items[2], "<number>", Kind.NUMBER).value
            numeric[fl] = val
        else:
            positive, atom = _literal(el, g, closed)
            if atom.predicate in derived:
                raise SemanticError(f"{el.line}:{el.column}: initial state may not contain derived predicate {atom.predicate}")
            if atom.predicate == "=":
                raise _fail(el, "equality cannot appear in the initial state")
            if positive:
                init.add(atom)

    timed.sort(key=lambda tl: tl.time)
    _check_complementary(timed)

    if ":goal" not in by_key or len(by_key[":goal"]) != 2:
        raise _fail(by_key.get(":goal", top), "expected (:goal <GD>)")
    goal = g.gd(by_key[":goal"].items[1], closed)

    metric = None
    if ":metric" in by_key:
        msec = by_key[":metric"]
        if len(msec) != 3 or _head(msec) != ":metric":
            raise _fail(msec, "expected (:metric minimize|maximize <f-exp>)")
        direction = _name(msec.items[1], "minimize or maximize")
        if direction not in ("minimize", "maximize"):
            raise _fail(msec.items[1], "expected minimize or maximize")
        metric = Metric(direction, g.fexp(msec.items[2], _Scope(total_time=True)))

    return Problem(
        name=name,
        domain_name=domain_name,
        requirements=requirements,
        objects=tuple(objects),
        init=frozenset(init),
        numeric_init=numeric,
        timed_literals=tuple(timed),
        goal=goal,
        metric=metric,
    )


def _literal(node: SList, g: _Grammar, scope: _Scope) -> tuple[bool, Atom]:
    if _head(node) == "not":
        if len(node) != 2:
            raise _fail(node, "expected (not <atomic formula(name)>)")
        return False, g.atom(_expect_list(node.items[1], "<atomic formula(name)>"), scope)
    return True, g.atom(node, scope)


def _timed_literal(el: SList, g: _Grammar, scope: _Scope, requirements: frozenset[str],
                   derived: frozenset[str]) -> TimedLiteral:
    where = f"{el.line}:{el.column}"
    if ":timed-initial-literals" not in requirements:
        raise SemanticError(f"{where}: timed initial literal requires the :timed-initial-literals requirement")
    time = el.items[1].value
    if time <= 0:
        raise SemanticError(f"{where}: timed initial literal time must be greater than 0, got {el.items[1].text}")
    positive, atom = _literal(el.items[2], g, scope)
    if atom.predicate in derived:
        raise RestrictionError(1, f"{where}: timed initial literal affects derived predicate {atom.predicate}")
    if atom.predicate == "=":
        raise _fail(el, "equality cannot be a timed literal")
    return TimedLiteral(time, atom, positive)


def _check_complementary(timed: list[TimedLiteral]) -> None:
    seen: dict[tuple[Fraction, Atom], bool] = {}
    for tl in timed:
        key = (tl.time, tl.atom)
        if seen.get(key, tl.positive) != tl.positive:
            raise SemanticError(f"timed initial literals at time {tl.time} both add and delete {tl.atom}")
        seen[key] = tl.positive


__all__ = [
    "REQUIREMENTS",
    "SList",
    "expand_requirements",
    "parse_domain",
    "parse_problem",
    "parse_typed_list",
    "read_sexprs",
]
