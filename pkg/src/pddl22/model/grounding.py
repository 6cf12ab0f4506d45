"""Instantiate rules and actions over the objects of a problem.

Quantifiers are expanded over the declared objects of the quantified
type(s) and equality atoms are decided on the spot, so ground formulas are
quantifier- and variable-free. Nothing else is simplified: a fact occurs in
a ground formula exactly when its lifted atom was instantiated to it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ..syntax.ast import (
    ADDITIVE_OPS,
    FALSE,
    TRUE,
    ActionDef,
    And,
    Assign,
    Atom,
    BinOp,
    Compare,
    Domain,
    DurationConstraint,
    DurationRef,
    DurativeActionDef,
    Effect,
    Exists,
    Fact,
    Fluent,
    Forall,
    ForallEffect,
    Formula,
    Imply,
    Neg,
    Not,
    Num,
    Or,
    Problem,
    TimedLiteral,
    TypedName,
    When,
    is_variable,
)
from ..syntax.printer import effect, formula, number
from .graph import DependencyGraph, build_dependency_graph, dpre
from .nnf import atoms, fluents
from .restrictions import Classification, check_restrictions

INSTANT = "instant"
START = "start"
END = "end"
INVARIANT = "invariant"
TIL = "til"


@dataclass(frozen=True)
class GroundRule:
    head: Fact
    body: Formula
    body_facts: frozenset[Fact] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "body_facts", frozenset(atoms(self.body)))

    def __str__(self) -> str:
        return f"{self.head} <- {formula(self.body)}"


@dataclass(frozen=True)
class GroundAction:
    """A simple (instantaneous) ground action.

    Durative actions contribute three of these (start, end, invariant guard)
    and each timed initial literal one. Conditional effects stay symbolic in
    ``effects``; ``add``/``delete`` collect every literal that *may* be
    asserted, which is what the mutex test needs.
    """

    name: str
    args: tuple[str, ...]
    origin: str = INSTANT
    precondition: Formula = TRUE
    effects: tuple[Effect, ...] = ()
    gpre: frozenset[Fact] = frozenset()
    dpre: frozenset[Fact] = frozenset()
    add: frozenset[Fact] = frozenset()
    delete: frozenset[Fact] = frozenset()
    lhs: frozenset[Fluent] = frozenset()
    rhs: frozenset[Fluent] = frozenset()
    additive: frozenset[Fluent] = frozenset()
    duration: Fraction | None = None
    duration_constraints: tuple[DurationConstraint, ...] = ()
    tag: str = ""

    @property
    def key(self) -> tuple[str, tuple[str, ...], str, str]:
        return self.name, self.args, self.origin, self.tag

    @property
    def label(self) -> str:
        if self.origin == TIL:
            return self.name
        body = "(" + " ".join((self.name,) + self.args) + ")"
        if self.origin in (START, END, INVARIANT):
            return f"{body}@{self.origin}"
        return body

    def __str__(self) -> str:
        return self.label


def make_action(name: str, args: Sequence[str] = (), *, origin: str = INSTANT,
                precondition: Formula = TRUE, effects: Sequence[Effect] = (),
                graph: DependencyGraph | None = None, duration: Fraction | None = None,
                duration_constraints: Sequence[DurationConstraint] = (), tag: str = "") -> GroundAction:
    """Build a :class:`GroundAction` from a ground precondition and effect list,
    deriving GPre, Add, Del, L, R and L* (and DPre when a graph is given)."""
    effects = tuple(effects)
    add: set[Fact] = set()
    delete: set[Fact] = set()
    reads: set[Fact] = set(atoms(precondition))
    rhs: set[Fluent] = set(fluents(precondition))
    ops: dict[Fluent, set[str]] = {}
    for eff in _flatten(effects):
        if isinstance(eff, Atom):
            add.add(eff)
        elif isinstance(eff, Not):
            delete.add(eff.arg)
        elif isinstance(eff, Assign):
            ops.setdefault(eff.fluent, set()).add(eff.op)
            rhs.update(fluents(eff.expr))
        elif isinstance(eff, When):
            reads.update(atoms(eff.condition))
            rhs.update(fluents(eff.condition))
    for c in duration_constraints:
        rhs.update(fluents(c.expr))
    gpre = frozenset(a for a in reads if a.predicate != "=")
    action = GroundAction(
        name=name,
        args=tuple(args),
        origin=origin,
        precondition=precondition,
        effects=effects,
        gpre=gpre,
        add=frozenset(add),
        delete=frozenset(delete),
        lhs=frozenset(ops),
        rhs=frozenset(rhs),
        additive=frozenset(f for f, o in ops.items() if o <= ADDITIVE_OPS),
        duration=duration,
        duration_constraints=tuple(duration_constraints),
        tag=tag,
    )
    if graph is not None:
        action = with_dpre(action, graph)
    return action


def with_dpre(action: GroundAction, graph: DependencyGraph) -> GroundAction:
    return replace(action, dpre=frozenset(dpre(action, graph)))


def _flatten(effects: Iterable[Effect]) -> Iterator[Effect]:
    """Every effect, including those nested in conditional effects (which are also yielded)."""
    for e in effects:
        yield e
        if isinstance(e, When):
            yield from _flatten(e.effects)


# ----------------------------------------------------------------------------
# substitution and quantifier expansion


class ObjectIndex:
    """Objects of a problem grouped by every type they belong to."""

    def __init__(self, domain: Domain, problem: Problem | None = None):
        self.domain = domain
        self.types: dict[str, str] = {c.name: c.types[0] for c in domain.constants}
        if problem is not None:
            self.types.update((o.name, o.types[0]) for o in problem.objects)
        self._by_type: dict[str, list[str]] = {}
        for obj, ty in self.types.items():
            for sup in domain.supertypes(ty):
                self._by_type.setdefault(sup, []).append(obj)

    def of_types(self, types: Iterable[str]) -> list[str]:
        seen: dict[str, None] = {}
        for t in types:
            for obj in self._by_type.get(t, ()):
                seen.setdefault(obj, None)
        return list(seen)

    def bindings(self, params: Sequence[TypedName]) -> Iterator[dict[str, str]]:
        pools = [self.of_types(p.types) for p in params]
        names = [p.name for p in params]
        for combo in itertools.product(*pools):
            yield dict(zip(names, combo))


def _sub_args(args: tuple[str, ...], binding: Mapping[str, str]) -> tuple[str, ...]:
    return tuple(binding.get(a, a) if is_variable(a) else a for a in args)


def ground_expr(e, binding: Mapping[str, str], duration: Fraction | None = None):
    if isinstance(e, Fluent):
        return Fluent(e.name, _sub_args(e.args, binding))
    if isinstance(e, BinOp):
        return BinOp(e.op, ground_expr(e.lhs, binding, duration), ground_expr(e.rhs, binding, duration))
    if isinstance(e, Neg):
        return Neg(ground_expr(e.arg, binding, duration))
    if isinstance(e, DurationRef) and duration is not None:
        return Num(duration)
    return e


def ground_formula(f: Formula, binding: Mapping[str, str], objects: ObjectIndex,
                   duration: Fraction | None = None) -> Formula:
    """Substitute ``binding`` and expand quantifiers: forall to a conjunction,
    exists to a disjunction, over the objects of the quantified types."""
    if isinstance(f, Atom):
        args = _sub_args(f.args, binding)
        if f.predicate == "=" and not any(is_variable(a) for a in args):
            return TRUE if args[0] == args[1] else FALSE
        return Atom(f.predicate, args)
    if isinstance(f, Not):
        return Not(ground_formula(f.arg, binding, objects, duration))
    if isinstance(f, And):
        return And(tuple(ground_formula(p, binding, objects, duration) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(ground_formula(p, binding, objects, duration) for p in f.parts))
    if isinstance(f, Imply):
        return Imply(ground_formula(f.antecedent, binding, objects, duration),
                     ground_formula(f.consequent, binding, objects, duration))
    if isinstance(f, (Exists, Forall)):
        parts = tuple(
            ground_formula(f.body, {**binding, **inner}, objects, duration)
            for inner in objects.bindings(f.params)
        )
        return Or(parts) if isinstance(f, Exists) else And(parts)
    if isinstance(f, Compare):
        return Compare(f.op, ground_expr(f.lhs, binding, duration), ground_expr(f.rhs, binding, duration))
    raise TypeError(f"not a formula: {f!r}")


def ground_effects(effects: Iterable[Effect], binding: Mapping[str, str], objects: ObjectIndex,
                   duration: Fraction | None = None) -> tuple[Effect, ...]:
    out: list[Effect] = []
    for e in effects:
        if isinstance(e, Atom):
            out.append(Atom(e.predicate, _sub_args(e.args, binding)))
        elif isinstance(e, Not):
            out.append(Not(Atom(e.arg.predicate, _sub_args(e.arg.args, binding))))
        elif isinstance(e, Assign):
            out.append(Assign(e.op, ground_expr(e.fluent, binding), ground_expr(e.expr, binding, duration)))
        elif isinstance(e, When):
            out.append(When(ground_formula(e.condition, binding, objects, duration),
                            ground_effects(e.effects, binding, objects, duration)))
        elif isinstance(e, ForallEffect):
            for inner in objects.bindings(e.params):
                out.extend(ground_effects(e.effects, {**binding, **inner}, objects, duration))
        else:
            raise TypeError(f"not an effect: {e!r}")
    return tuple(out)


# ----------------------------------------------------------------------------
# rules and the model


def ground_rules(domain: Domain, objects: ObjectIndex) -> tuple[GroundRule, ...]:
    """Instantiate every rule over all type-respecting head argument vectors."""
    out: list[GroundRule] = []
    for rule in domain.rules:
        pred = domain.predicate(rule.head.predicate)
        params = tuple(TypedName(var, p.types) for var, p in zip(rule.head.args, pred.params))
        for binding in objects.bindings(params):
            head = Atom(rule.head.predicate, _sub_args(rule.head.args, binding))
            out.append(GroundRule(head, ground_formula(rule.body, binding, objects)))
    return tuple(out)


@dataclass(frozen=True)
class DurativeSplit:
    start: GroundAction
    end: GroundAction
    invariant: GroundAction


class GroundModel:
    """Ground rules, dependency graph and on-demand ground actions for one problem.

    Construction enforces the three rule restrictions. Actions are
    instantiated lazily (:meth:`action`) or all at once (:meth:`ground_actions`);
    both produce identical objects.
    """

    def __init__(self, domain: Domain, problem: Problem):
        self.domain = domain
        self.problem = problem
        self.classification: Classification = check_restrictions(domain, problem)
        self.objects = ObjectIndex(domain, problem)
        self.rules = ground_rules(domain, self.objects)
        self.graph = build_dependency_graph(self.rules)
        self.goal = ground_formula(problem.goal, {}, self.objects)
        self._cache: dict[tuple, GroundAction | DurativeSplit] = {}

    def is_derived(self, fact: Fact) -> bool:
        return fact.predicate in self.classification.derived

    def action(self, name: str, args: Sequence[str], duration: Fraction | None = None):
        """Ground instance of action ``name``; a :class:`DurativeSplit` for durative actions."""
        key = (name, tuple(args), duration)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        schema = self.domain.action(name)
        if schema is None:
            raise KeyError(name)
        binding = dict(zip((p.name for p in schema.params), args))
        if isinstance(schema, ActionDef):
            result = make_action(
                name, args,
                precondition=ground_formula(schema.precondition, binding, self.objects),
                effects=ground_effects(schema.effects, binding, self.objects),
                graph=self.graph,
            )
        else:
            result = self._durative(schema, tuple(args), binding, duration)
        self._cache[key] = result
        return result

    def _durative(self, schema: DurativeActionDef, args, binding, duration) -> DurativeSplit:
        def cond(when: str) -> Formula:
            return ground_formula(schema.condition(when), binding, self.objects, duration)

        def effs(when: str) -> tuple[Effect, ...]:
            return ground_effects(schema.effects_at(when), binding, self.objects, duration)

        constraints = tuple(
            DurationConstraint(c.op, ground_expr(c.expr, binding)) for c in schema.duration
        )
        common = dict(graph=self.graph, duration=duration)
        return DurativeSplit(
            start=make_action(schema.name, args, origin=START, precondition=cond("start"),
                              effects=effs("start"), duration_constraints=constraints, **common),
            end=make_action(schema.name, args, origin=END, precondition=cond("end"),
                            effects=effs("end"), **common),
            invariant=make_action(schema.name, args, origin=INVARIANT, precondition=cond("all"), **common),
        )

    def til_action(self, tl: TimedLiteral) -> GroundAction:
        effect = tl.atom if tl.positive else Not(tl.atom)
        lit = str(tl.atom) if tl.positive else f"(not {tl.atom})"
        return make_action(f"(at {number(tl.time)} {lit})", (), origin=TIL, effects=(effect,), graph=self.graph)

    def ground_actions(self) -> list[GroundAction]:
        """Every simple ground action of the domain (durative ones without a fixed duration)."""
        out: list[GroundAction] = []
        for schema in self.domain.actions:
            for binding in self.objects.bindings(schema.params):
                args = tuple(binding[p.name] for p in schema.params)
                inst = self.action(schema.name, args)
                if isinstance(inst, DurativeSplit):
                    out.extend((inst.start, inst.end, inst.invariant))
                else:
                    out.append(inst)
        return out


def ground(domain: Domain, problem: Problem) -> tuple[frozenset[GroundAction], frozenset[GroundRule]]:
    """Eagerly ground every action and rule of ``domain`` over ``problem``'s objects."""
    model = GroundModel(domain, problem)
    return frozenset(model.ground_actions()), frozenset(model.rules)


def dump_model(model: GroundModel) -> str:
    """Line-oriented dump of the ground model, one entity per line, for diffing."""
    lines = [f"rule {r}" for r in sorted(model.rules, key=str)]
    for a in sorted(model.ground_actions(), key=lambda a: (a.label, a.origin)):
        lines.append(
            f"action {a.label} pre={formula(a.precondition)} "
            f"eff=[{' '.join(effect(e) for e in a.effects)}]"
        )
    edges = sorted((str(src), str(dst)) for src, dsts in model.graph.edges.items() for dst in dsts)
    lines.extend(f"edge {s} -> {d}" for s, d in edges)
    return "\n".join(lines) + "\n"
