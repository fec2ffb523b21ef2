"""Matching rigid patterns against a graph.

``GraphSink`` consumes walker events: node and edge events bind graph
elements (joining on repeated annotated variables), scope events enforce
restrictors on the sub-path they delimit, and predicates are evaluated as
soon as everything they mention is bound, or at the end of the match.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Optional

from ..graph import Direction, Path, PropertyGraph, RESTRICTOR_CHECKS
from ..syntax import ast as A
from .expand import (CloseScope, EdgeEvent, NodeEvent, OpenScope, Predicate,
                     RigidPattern, Sink, Tag, Vector, walk)
from .expr import ElementRef, Group, eval_bool_expr
from .normalize import NormalizedPattern

_ACCEPT = {Direction.FORWARD: "R", Direction.BACKWARD: "L", Direction.UNDIRECTED: "U"}

Key = tuple[str, Vector]


@dataclass(frozen=True)
class Occurrence:
    """One elementary binding of a named variable."""

    name: str
    vector: Vector
    element: str


@dataclass(frozen=True)
class PathBinding:
    path: Path
    node_names: tuple[tuple[str, ...], ...]  # named variables at each node position
    edge_names: tuple[Optional[str], ...]
    occurrences: tuple[Occurrence, ...]
    tags: tuple[tuple[int, int], ...]

    def reduced_key(self) -> tuple:
        seq = []
        for i, n in enumerate(self.path.nodes):
            seq.append((self.node_names[i], n))
            if i < len(self.path.edges):
                seq.append((self.edge_names[i], self.path.edges[i]))
        return tuple(seq), self.tags


@dataclass(frozen=True)
class _State:
    node: Optional[str] = None
    nodes: tuple = ()
    edges: tuple = ()
    dirs: tuple = ()
    node_names: tuple = ()
    edge_names: tuple = ()
    env: Mapping[Key, str] = None
    occurrences: tuple = ()
    scopes: tuple = ()  # (restrictor, first node index, first edge index)
    pending: tuple = ()
    tags: tuple = ()


class BindingScope:
    """Variable lookup for a predicate evaluated at iteration ``vector``."""

    def __init__(self, depth: Mapping[str, int], env: Mapping[Key, str],
                 occurrences, vector: Vector):
        self.depth, self.env, self.occurrences, self.vector = depth, env, occurrences, vector

    def lookup(self, name: str):
        d = self.depth.get(name)
        if d is None:
            return None
        if len(self.vector) >= d:
            el = self.env.get((name, self.vector[:d]))
            return None if el is None else ElementRef(el)
        n = len(self.vector)
        return Group(o.element for o in self.occurrences
                     if o.name == name and o.vector[:n] == self.vector)


class GraphSink(Sink):
    def __init__(self, graph: PropertyGraph, depth: Mapping[str, int]):
        self.graph = graph
        self.depth = depth  # quantifier depth of each element variable

    def start(self):
        return _State(env={})

    # -- helpers --

    def _bind(self, st: _State, name: Optional[str], vector: Vector, el: str):
        if name is None:
            return st
        key = (name, vector)
        bound = st.env.get(key)
        if bound is not None and bound != el:
            return None
        env = st.env if bound is not None else {**st.env, key: el}
        return replace(st, env=env, occurrences=st.occurrences + (Occurrence(name, vector, el),))

    def _ready(self, expr: A.Expr, st: _State, vector: Vector) -> bool:
        for v, _ in A.iter_vars(expr):
            d = self.depth.get(v.name)
            if d is None:
                continue
            if len(vector) < d or (v.name, vector[:d]) not in st.env:
                return False
        return True

    def _test(self, expr: A.Expr, st: _State, vector: Vector) -> bool:
        scope = BindingScope(self.depth, st.env, st.occurrences, vector)
        return eval_bool_expr(expr, scope, self.graph) is True

    def _step_ok(self, st: _State, edge: str, target: str) -> bool:
        for r, ni, ei in st.scopes:
            if r == A.Restrictor.TRAIL:
                if edge in st.edges[ei:]:
                    return False
            elif r == A.Restrictor.ACYCLIC:
                if target in st.nodes[ni:]:
                    return False
            elif target in st.nodes[ni + 1:]:
                return False
        return True

    # -- events --

    def event(self, st: _State, ev):
        if isinstance(ev, NodeEvent):
            return self._node(st, ev)
        if isinstance(ev, EdgeEvent):
            return self._edge(st, ev)
        if isinstance(ev, Predicate):
            if self._ready(ev.expr, st, ev.vector):
                return (st,) if self._test(ev.expr, st, ev.vector) else ()
            return (replace(st, pending=st.pending + (ev,)),)
        if isinstance(ev, Tag):
            return (replace(st, tags=st.tags + ((ev.alternation, ev.branch),)),)
        if isinstance(ev, OpenScope):
            scope = (ev.restrictor, max(len(st.nodes) - 1, 0), len(st.edges))
            return (replace(st, scopes=st.scopes + (scope,)),)
        if isinstance(ev, CloseScope):
            r, ni, ei = st.scopes[-1]
            sub = Path(st.nodes[ni:] or (st.node,), st.edges[ei:])
            if st.nodes and not RESTRICTOR_CHECKS[r.value](sub):
                return ()
            return (replace(st, scopes=st.scopes[:-1]),)
        raise TypeError(ev)

    def _node(self, st: _State, ev: NodeEvent):
        p = ev.node.pattern
        if st.node is None:
            starts = [replace(st, node=n, nodes=(n,), node_names=((),)) for n in self.graph.nodes]
        else:
            starts = [st]
        out = []
        for s in starts:
            if not A.label_matches(p.label, self.graph.nodes[s.node].labels):
                continue
            s = self._bind(s, p.var, ev.vector, s.node)
            if s is None:
                continue
            if p.var is not None:
                names = s.node_names[:-1] + (s.node_names[-1] + (p.var,),)
                s = replace(s, node_names=names)
            out.append(s)
        return out

    def _edge(self, st: _State, ev: EdgeEvent):
        p = ev.edge.pattern
        accepts = p.orientation.accepts
        out = []
        for step in self.graph.steps_from(st.node):
            if _ACCEPT[step.direction] not in accepts:
                continue
            if not A.label_matches(p.label, self.graph.edges[step.edge].labels):
                continue
            if not self._step_ok(st, step.edge, step.target):
                continue
            s = replace(st, node=step.target, nodes=st.nodes + (step.target,),
                        edges=st.edges + (step.edge,), dirs=st.dirs + (step.direction,),
                        node_names=st.node_names + ((),),
                        edge_names=st.edge_names + (p.var,))
            s = self._bind(s, p.var, ev.vector, step.edge)
            if s is not None:
                out.append(s)
        return out

    def finish(self, st: _State):
        for ev in st.pending:
            if not self._test(ev.expr, st, ev.vector):
                return
        yield PathBinding(Path(st.nodes, st.edges, st.dirs), st.node_names,
                          st.edge_names, st.occurrences, st.tags)


def match_pattern(np: NormalizedPattern, graph: PropertyGraph, bounds: dict[int, int],
                  depth: Mapping[str, int]) -> Iterator[PathBinding]:
    """Path bindings of every expansion of ``np``; expansion and matching are
    interleaved so a failing prefix prunes all expansions that share it."""
    return walk(np, bounds, GraphSink(graph, depth))


def match_rigid(rigid: RigidPattern, graph: PropertyGraph,
                depth: Mapping[str, int]) -> list[PathBinding]:
    """Path bindings of a single rigid pattern."""
    sink = GraphSink(graph, depth)
    states = [sink.start()]
    for ev in rigid.events:
        states = [s2 for s in states for s2 in sink.event(s, ev)]
    return [b for s in states for b in sink.finish(s)]
