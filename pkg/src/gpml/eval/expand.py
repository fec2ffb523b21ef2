"""Expansion of a normalized pattern into rigid patterns.

The walker below is shared by expansion and matching: it steps through the
normalized sequence, choosing an iteration count for every group and a branch
for every iteration, and reports each elementary event to a *sink*. A sink
turns a state plus an event into zero or more successor states, so the
recording sink used here simply logs events while the graph sink in
``match`` binds graph elements and prunes as it goes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from ..graph import PropertyGraph
from ..syntax import ast as A
from .normalize import _ARROWS, Group, NEdge, NNode, NormalizedPattern, Seq, Slot, _spec

Vector = tuple[int, ...]

# -- bounds -----------------------------------------------------------------


def restrictor_cap(restrictor: A.Restrictor, graph: PropertyGraph) -> int:
    """Most edges a path obeying ``restrictor`` can have in ``graph``."""
    if restrictor == A.Restrictor.TRAIL:
        return len(graph.edges)
    if restrictor == A.Restrictor.ACYCLIC:
        return max(len(graph.nodes) - 1, 0)
    return len(graph.nodes)


def expansion_bound(np: NormalizedPattern, graph: PropertyGraph) -> dict[int, int]:
    """Largest iteration count worth trying for every group, keyed by group id.

    Finite quantifiers keep their maximum. An unbounded one under a restrictor
    gets |E| (TRAIL) or |N| (ACYCLIC, SIMPLE), since every iteration adds an
    edge. One bounded only by a selector that keeps k paths per partition gets
    min + k*|N|: among more iterations than that some boundary node repeats
    k+1 times, and cutting the loops between its occurrences yields k shorter
    matches with the same endpoints, so the longer one is never selected.
    """
    bounds: dict[int, int] = {}
    k = np.selector.count if np.selector else 1

    def visit(seq: Seq, restrictors: tuple) -> None:
        for item in seq:
            if not isinstance(item, Group):
                continue
            if item.max is not None:
                bounds[item.id] = item.max
            elif restrictors:
                bounds[item.id] = min(
                    len(graph.edges) if r == A.Restrictor.TRAIL else len(graph.nodes)
                    for r in restrictors)
            else:
                bounds[item.id] = item.min + k * len(graph.nodes)
            inner = restrictors + ((item.restrictor,) if item.restrictor else ())
            for b in item.branches:
                visit(b, inner)

    visit(np.seq, (np.restrictor,) if np.restrictor else ())
    return bounds


# -- events and the walker --------------------------------------------------


@dataclass(frozen=True)
class NodeEvent:
    node: NNode
    vector: Vector


@dataclass(frozen=True)
class EdgeEvent:
    edge: NEdge
    vector: Vector


@dataclass(frozen=True)
class OpenScope:
    restrictor: A.Restrictor


@dataclass(frozen=True)
class CloseScope:
    restrictor: A.Restrictor


@dataclass(frozen=True)
class Predicate:
    expr: A.Expr
    vector: Vector


@dataclass(frozen=True)
class Tag:
    alternation: int
    branch: int


class Sink:
    """Successor states for each event; an empty result prunes the branch."""

    def start(self):
        raise NotImplementedError

    def event(self, state, ev) -> Iterable:
        raise NotImplementedError

    def finish(self, state) -> Iterable:
        raise NotImplementedError


def _events_for_slot(slot: Slot, vector: Vector):
    out = []
    for n in slot.nodes:
        out.append(NodeEvent(n, vector))
        if n.pattern.where is not None:
            out.append(Predicate(n.pattern.where, vector))
    return out


def _chain(sink: Sink, states: Iterable, events) -> Iterator:
    if not events:
        yield from states
        return
    head, rest = events[0], events[1:]
    for s in states:
        yield from _chain(sink, sink.event(s, head), rest)


def walk(np: NormalizedPattern, bounds: dict[int, int], sink: Sink) -> Iterator:
    """All final sink states for every expansion of ``np``."""
    start = sink.start()
    head = [OpenScope(np.restrictor)] if np.restrictor else []
    tail = [CloseScope(np.restrictor)] if np.restrictor else []

    def done(state):
        for s in _chain(sink, [state], tail):
            yield from sink.finish(s)

    for s in _chain(sink, [start], head):
        yield from _walk_seq(np.seq, 0, s, (), bounds, sink, done)


Cont = Callable[[object], Iterator]


def _walk_seq(seq: Seq, i: int, state, vector: Vector, bounds, sink: Sink,
              k: Cont) -> Iterator:
    if i == len(seq):
        yield from k(state)
        return
    item = seq[i]

    def rest(s):
        return _walk_seq(seq, i + 1, s, vector, bounds, sink, k)

    if isinstance(item, Slot):
        for s in _chain(sink, [state], _events_for_slot(item, vector)):
            yield from rest(s)
    elif isinstance(item, NEdge):
        events = [EdgeEvent(item, vector)]
        if item.pattern.where is not None:
            events.append(Predicate(item.pattern.where, vector))
        for s in _chain(sink, [state], events):
            yield from rest(s)
    else:
        yield from _walk_group(item, state, vector, bounds, sink, rest)


def _walk_group(g: Group, state, vector: Vector, bounds, sink: Sink, k: Cont) -> Iterator:
    hi = bounds.get(g.id, g.max if g.max is not None else g.min)

    def iterate(n: int, state):
        if n >= g.min:
            yield from k(state)
        if n >= hi:
            return
        inner = vector + (n + 1,) if g.counted else vector
        closing = []
        if g.restrictor is not None:
            closing.append(CloseScope(g.restrictor))
        if g.where is not None:
            closing.append(Predicate(g.where, inner))

        def next_iteration(s):
            for s2 in _chain(sink, [s], closing):
                yield from iterate(n + 1, s2)

        for b, branch in enumerate(g.branches):
            opening = []
            if g.alternation is not None:
                opening.append(Tag(g.alternation, b))
            if g.restrictor is not None:
                opening.append(OpenScope(g.restrictor))
            for s in _chain(sink, [state], opening):
                yield from _walk_seq(branch, 0, s, inner, bounds, sink, next_iteration)

    yield from iterate(0, state)


# -- rigid patterns ---------------------------------------------------------


@dataclass(frozen=True)
class RigidPattern:
    """One expansion: a fixed event sequence with ``length`` edges."""

    events: tuple
    length: int

    def render(self) -> str:
        """Display form after clean-up: an anonymous node next to another node
        pattern is dropped (one node of an all-anonymous run is kept)."""
        runs: list[list[tuple[bool, str]]] = [[]]
        for ev in self.events:
            sup = "^" + ".".join(map(str, ev.vector)) if getattr(ev, "vector", ()) else ""
            if isinstance(ev, NodeEvent):
                p = ev.node.pattern
                text = "(" + _spec((ev.node.var or ev.node.anon) + sup, p.label, None) + ")"
                runs[-1].append((ev.node.var is None, text))
            elif isinstance(ev, EdgeEvent):
                p = ev.edge.pattern
                left, right = _ARROWS[p.orientation]
                runs.append([(False, left + _spec((ev.edge.var or ev.edge.anon) + sup,
                                                  p.label, None) + right)])
                runs.append([])
        parts = []
        for run in runs:
            kept = [text for anon, text in run if not anon] or [text for _, text in run[:1]]
            parts += kept
        return " ".join(parts)


class _Recorder(Sink):
    def __init__(self, length: int):
        self.length = length

    def start(self):
        return ((), 0)

    def event(self, state, ev):
        events, n = state
        if isinstance(ev, EdgeEvent):
            if n + 1 > self.length:
                return ()
            return ((events + (ev,), n + 1),)
        return ((events + (ev,), n),)

    def finish(self, state):
        events, n = state
        if n == self.length:
            yield RigidPattern(events, n)


def max_length(np: NormalizedPattern, bounds: dict[int, int],
               graph: Optional[PropertyGraph] = None) -> int:
    """Longest rigid pattern the bounds allow (clipped by restrictors when a
    graph is given)."""

    def seq_len(seq: Seq) -> int:
        total = 0
        for item in seq:
            if isinstance(item, NEdge):
                total += 1
            elif isinstance(item, Group):
                per = max(seq_len(b) for b in item.branches)
                if graph is not None and item.restrictor is not None:
                    per = min(per, restrictor_cap(item.restrictor, graph))
                total += per * bounds.get(item.id, item.max or item.min)
        return total

    total = seq_len(np.seq)
    if graph is not None and np.restrictor is not None:
        total = min(total, restrictor_cap(np.restrictor, graph))
    return total


def expand(np: NormalizedPattern, bounds: dict[int, int],
           graph: Optional[PropertyGraph] = None) -> Iterator[RigidPattern]:
    """Every rigid pattern within ``bounds``, in nondecreasing length."""
    for length in range(max_length(np, bounds, graph) + 1):
        yield from walk(np, bounds, _Recorder(length))
