"""Fact dependency graph over ground rules and the DPre sets derived from it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from ..syntax.ast import Fact


@dataclass
class DependencyGraph:
    """Edge ``F -> F'`` iff some ground rule has head ``F'`` and ``F`` occurs in its body."""

    edges: dict[Fact, set[Fact]] = field(default_factory=dict)
    _into: dict[Fact, set[Fact]] = field(default_factory=dict, repr=False)
    _ancestors: dict[Fact, frozenset[Fact]] = field(default_factory=dict, repr=False)

    @property
    def nodes(self) -> set[Fact]:
        out = set(self.edges)
        for dsts in self.edges.values():
            out |= dsts
        return out

    def add_edge(self, src: Fact, dst: Fact) -> None:
        self.edges.setdefault(src, set()).add(dst)
        self._into.setdefault(dst, set()).add(src)
        self._ancestors.clear()

    def has_edge(self, src: Fact, dst: Fact) -> bool:
        return dst in self.edges.get(src, ())

    def ancestors(self, fact: Fact) -> frozenset[Fact]:
        """Facts with a path of length >= 1 into ``fact``."""
        cached = self._ancestors.get(fact)
        if cached is not None:
            return cached
        seen: set[Fact] = set()
        todo = deque(self._into.get(fact, ()))
        while todo:
            f = todo.popleft()
            if f in seen:
                continue
            seen.add(f)
            todo.extend(self._into.get(f, ()))
        result = frozenset(seen)
        self._ancestors[fact] = result
        return result

    def has_path(self, src: Fact, dst: Fact) -> bool:
        return src in self.ancestors(dst)

    def __len__(self) -> int:
        return sum(len(d) for d in self.edges.values())


def build_dependency_graph(rules: Iterable) -> DependencyGraph:
    graph = DependencyGraph()
    for rule in rules:
        for fact in rule.body_facts:
            graph.add_edge(fact, rule.head)
    return graph


def dpre(action, graph: DependencyGraph) -> set[Fact]:
    """Facts that can influence the truth of some fact in the action's GPre."""
    out: set[Fact] = set()
    for fact in action.gpre:
        out |= graph.ancestors(fact)
    return out
