"""Brute-force reference semantics for differential testing.

Every walk up to a length cap is enumerated and tested against the syntax
tree by trying every decomposition. Restrictors, joins, predicates,
deduplication, selectors, the cross product and the final WHERE are then
applied by definition. Nothing here uses the engine's normalization,
expansion or matching code; only the graph, the syntax tree, the analyzer's
variable table and the expression evaluator are shared.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .analyzer import AnalyzedQuery, analyze
from .errors import CapExceeded
from .eval.engine import ResultTable
from .eval.expr import DictScope, ElementRef, Group, eval_bool_expr
from .graph import Direction, Path, PropertyGraph, is_acyclic, is_simple, is_trail
from .syntax import ast as A

DEFAULT_MAX_PATHS = 10 ** 7
DEFAULT_MAX_ROWS = 10 ** 6
DEFAULT_MAX_STEPS = 10 ** 8

_CHECK = {A.Restrictor.TRAIL: is_trail, A.Restrictor.ACYCLIC: is_acyclic,
          A.Restrictor.SIMPLE: is_simple}
_TRAVERSAL = {Direction.FORWARD: "R", Direction.BACKWARD: "L", Direction.UNDIRECTED: "U"}


@dataclass
class OracleConfig:
    max_path_length: Optional[int] = None  # None: derived from the query
    max_paths: int = DEFAULT_MAX_PATHS
    max_rows: int = DEFAULT_MAX_ROWS
    max_steps: int = DEFAULT_MAX_STEPS  # pattern-against-path matching work


# -- walks ------------------------------------------------------------------


def enumerate_paths(graph: PropertyGraph, max_len: int, step_ok=None,
                    prefix_ok=None, max_paths: int = DEFAULT_MAX_PATHS) -> Iterator[Path]:
    """Every walk with at most ``max_len`` edges, each edge in every direction
    it can be traversed. ``step_ok(step)`` and ``prefix_ok(nodes, edges)`` may
    prune; raises ``CapExceeded`` past ``max_paths`` walks."""
    count = 0

    def extend(nodes, edges, dirs):
        nonlocal count
        count += 1
        if count > max_paths:
            raise CapExceeded(f"more than {max_paths} paths")
        yield Path(tuple(nodes), tuple(edges), tuple(dirs))
        if len(edges) == max_len:
            return
        for step in graph.steps_from(nodes[-1]):
            if step_ok is not None and not step_ok(step):
                continue
            nodes.append(step.target)
            edges.append(step.edge)
            dirs.append(step.direction)
            if prefix_ok is None or prefix_ok(nodes, edges):
                yield from extend(nodes, edges, dirs)
            nodes.pop()
            edges.pop()
            dirs.pop()

    for n in graph.nodes:
        yield from extend([n], [], [])


def _restrictor_len(r: A.Restrictor, graph: PropertyGraph) -> int:
    if r == A.Restrictor.TRAIL:
        return len(graph.edges)
    return len(graph.nodes) - 1 if r == A.Restrictor.ACYCLIC else len(graph.nodes)


def structural_cap(pp: A.PathPattern, graph: PropertyGraph) -> int:
    """Longest path any kept match of ``pp`` can have on ``graph``."""
    k = pp.selector.count if pp.selector else 1
    n = len(graph.nodes)

    def iterations(q: A.Quantifier, restricted: bool) -> float:
        if q.max is not None:
            return q.max
        return math.inf if restricted else q.min + k * n

    def longest(t: A.Term, restricted: bool) -> float:
        if isinstance(t, A.NodePattern):
            return 0
        if isinstance(t, A.EdgePattern):
            return iterations(t.quantifier, restricted) if t.quantifier else 1
        if isinstance(t, A.Concat):
            return sum(longest(i, restricted) for i in t.items)
        if isinstance(t, (A.Union_, A.Alternation)):
            return max(longest(i, restricted) for i in t.items)
        per = longest(t.inner, restricted or t.restrictor is not None)
        if t.restrictor is not None:
            per = min(per, _restrictor_len(t.restrictor, graph))
        if isinstance(t.quantifier, A.Quantifier):
            times = iterations(t.quantifier, restricted)
            return 0 if per == 0 else per * times
        return per

    total = longest(pp.body, pp.restrictor is not None)
    if pp.restrictor is not None:
        total = min(total, _restrictor_len(pp.restrictor, graph))
    if total == math.inf:
        raise ValueError("pattern has no finite length cap")
    return int(total)


# -- decomposition ----------------------------------------------------------
# A decomposition is a tuple of records in left-to-right order:
#   ("node", name, vector, position)   ("edge", name, vector, index)
#   ("pred", expr, vector)   ("seg", restrictor, start, end)   ("tag", ordinal, branch)


class _Matcher:
    def __init__(self, pp: A.PathPattern, graph: PropertyGraph,
                 max_steps: int = DEFAULT_MAX_STEPS):
        self.graph = graph
        self.steps = 0
        self.max_steps = max_steps
        alts = [t for t in A.walk_terms(pp.body) if isinstance(t, A.Alternation)]
        self.ordinal = {id(t): i for i, t in enumerate(alts)}

    def match(self, t: A.Term, path: Path, i: int, vec: tuple) -> Iterator[tuple[int, tuple]]:
        self.steps += 1
        if self.steps > self.max_steps:
            raise CapExceeded(f"more than {self.max_steps} matching steps")
        g = self.graph
        if isinstance(t, A.NodePattern):
            if A.label_matches(t.label, g.nodes[path.nodes[i]].labels):
                recs = (("node", t.var, vec, i),)
                if t.where is not None:
                    recs += (("pred", t.where, vec),)
                yield i, recs
            return
        if isinstance(t, A.EdgePattern):
            if t.quantifier is not None:
                yield from self.repeat(A.EdgePattern(t.orientation, t.var, t.label, t.where),
                                       t.quantifier, None, None, path, i, vec)
                return
            if i >= len(path.edges):
                return
            eid = path.edges[i]
            if _TRAVERSAL[path.directions[i]] not in t.orientation.accepts:
                return
            if not A.label_matches(t.label, g.edges[eid].labels):
                return
            recs = (("edge", t.var, vec, i),)
            if t.where is not None:
                recs += (("pred", t.where, vec),)
            yield i + 1, recs
            return
        if isinstance(t, A.Concat):
            yield from self.sequence(t.items, path, i, vec)
            return
        if isinstance(t, A.Union_):
            for item in t.items:
                yield from self.match(item, path, i, vec)
            return
        if isinstance(t, A.Alternation):
            for b, item in enumerate(t.items):
                for j, recs in self.match(item, path, i, vec):
                    yield j, (("tag", self.ordinal[id(t)], b),) + recs
            return
        # parenthesized
        q = t.quantifier
        if isinstance(q, A.Quantifier):
            yield from self.repeat(t.inner, q, t.restrictor, t.where, path, i, vec)
            return
        if isinstance(q, A.QuestionMark):
            yield i, ()
        yield from self.once(t.inner, t.restrictor, t.where, path, i, vec)

    def sequence(self, items, path, i, vec):
        if not items:
            yield i, ()
            return
        for j, first in self.match(items[0], path, i, vec):
            for k, rest in self.sequence(items[1:], path, j, vec):
                yield k, first + rest

    def once(self, body, restrictor, where, path, i, vec):
        for j, recs in self.match(body, path, i, vec):
            if restrictor is not None:
                recs = recs + (("seg", restrictor, i, j),)
            if where is not None:
                recs = recs + (("pred", where, vec),)
            yield j, recs

    def repeat(self, body, q, restrictor, where, path, i, vec):
        def go(n, i):
            if n >= q.min:
                yield i, ()
            if q.max is not None and n >= q.max:
                return
            for j, recs in self.once(body, restrictor, where, path, i, vec + (n + 1,)):
                if q.max is None and j == i:
                    continue  # cannot happen for accepted queries; guards recursion
                for k, more in go(n + 1, j):
                    yield k, recs + more

        yield from go(0, i)


# -- per-pattern semantics --------------------------------------------------


@dataclass(frozen=True)
class _Row:
    key: tuple
    path: Path
    values: dict


class _Lookup:
    def __init__(self, occ, depth, vec):
        self.occ, self.depth, self.vec = occ, depth, vec

    def lookup(self, name):
        d = self.depth.get(name)
        if d is None:
            return None
        if len(self.vec) >= d:
            want = self.vec[:d]
            for o_name, o_vec, el in self.occ:
                if o_name == name and o_vec == want:
                    return ElementRef(el)
            return None
        n = len(self.vec)
        return Group(el for o_name, o_vec, el in self.occ
                     if o_name == name and o_vec[:n] == self.vec)


def _accepting_step(pp: A.PathPattern, graph: PropertyGraph):
    edges = [t for t in A.walk_terms(pp.body) if isinstance(t, A.EdgePattern)]

    def ok(step) -> bool:
        mark = _TRAVERSAL[step.direction]
        labels = graph.edges[step.edge].labels
        return any(mark in e.orientation.accepts and A.label_matches(e.label, labels)
                   for e in edges)

    return ok


def _prefix_check(r: Optional[A.Restrictor]):
    if r == A.Restrictor.TRAIL:
        return lambda nodes, edges: edges[-1] not in edges[:-1]
    if r == A.Restrictor.ACYCLIC:
        return lambda nodes, edges: nodes[-1] not in nodes[:-1]
    if r == A.Restrictor.SIMPLE:
        # only the first node may come back, and only as the last one
        return lambda nodes, edges: nodes[-1] not in nodes[1:-1] and nodes[0] not in nodes[1:-1]
    return None


def _evaluate(records, path: Path, depth, graph) -> Optional[tuple]:
    occ = []
    node_names = [[] for _ in path.nodes]
    edge_names: list = [None] * len(path.edges)
    tags = []
    for rec in records:
        if rec[0] == "node":
            _, name, vec, pos = rec
            if name is not None:
                occ.append((name, vec, path.nodes[pos]))
                node_names[pos].append(name)
        elif rec[0] == "edge":
            _, name, vec, pos = rec
            if name is not None:
                occ.append((name, vec, path.edges[pos]))
                edge_names[pos] = name
        elif rec[0] == "tag":
            tags.append((rec[1], rec[2]))
        elif rec[0] == "seg":
            _, r, i, j = rec
            if not _CHECK[r](Path(path.nodes[i:j + 1], path.edges[i:j])):
                return None
    seen = {}
    for name, vec, el in occ:
        if seen.setdefault((name, vec), el) != el:
            return None
    for rec in records:
        if rec[0] == "pred":
            if eval_bool_expr(rec[1], _Lookup(occ, depth, rec[2]), graph) is not True:
                return None
    seq = []
    for i, n in enumerate(path.nodes):
        seq.append((tuple(node_names[i]), n))
        if i < len(path.edges):
            seq.append((edge_names[i], path.edges[i]))
    return (tuple(seq), tuple(tags)), occ


def _select(selector: Optional[A.Selector], rows: list[_Row]) -> list[_Row]:
    if selector is None:
        return rows
    by_ends: dict = {}
    for r in rows:
        by_ends.setdefault((r.path.first, r.path.last), []).append(r)

    def rank(r: _Row):
        seq, tags = r.key
        layout = tuple(x if isinstance(x, tuple) else (x or "",) for x, _ in seq)
        return len(r.path), r.path.elements(), layout, tags

    kept = []
    for ends in sorted(by_ends):
        cands = sorted(by_ends[ends], key=rank)
        lengths = sorted({len(r.path) for r in cands})
        kind, k = selector.kind, selector.count
        if kind in ("ANY SHORTEST", "ANY", "ANY k", "SHORTEST k"):
            kept += cands[:k]
        elif kind == "ALL SHORTEST":
            kept += [r for r in cands if len(r.path) == lengths[0]]
        else:
            kept += [r for r in cands if len(r.path) in lengths[:k]]
    return kept


def oracle_pattern(aq: AnalyzedQuery, index: int, graph: PropertyGraph,
                   config: OracleConfig) -> list[_Row]:
    pp = aq.ast.patterns[index]
    depth = {n: len(v.chain) for n, v in aq.variables.vars.items()
             if v.kind != "path" and index in v.patterns}
    cap = config.max_path_length
    if cap is None:
        cap = structural_cap(pp, graph)
    matcher = _Matcher(pp, graph, config.max_steps)
    rows: dict[tuple, _Row] = {}
    walks = enumerate_paths(graph, cap, _accepting_step(pp, graph),
                            _prefix_check(pp.restrictor), config.max_paths)
    for path in walks:
        if pp.restrictor is not None and not _CHECK[pp.restrictor](path):
            continue
        for j, records in matcher.match(pp.body, path, 0, ()):
            if j != len(path.edges):
                continue
            result = _evaluate(records, path, depth, graph)
            if result is None:
                continue
            key, occ = result
            if key in rows:
                continue
            values: dict = {}
            for name, d in depth.items():
                els = [el for n, _, el in occ if n == name]
                values[name] = els if d else (els[0] if els else None)
            if pp.var is not None:
                values[pp.var] = path
            rows[key] = _Row(key, path, values)
    return _select(pp.selector, list(rows.values()))


def _cell_order(v) -> tuple:
    # rows sharing paths are ordered by their values: null < path < group < element
    if v is None:
        return (0, ())
    if isinstance(v, Path):
        return (1, v.elements())
    if isinstance(v, list):
        return (2, tuple(v))
    return (3, (v,))


def oracle_match(query: Union[str, A.Query, AnalyzedQuery], graph: PropertyGraph,
                 config: Optional[OracleConfig] = None) -> ResultTable:
    aq = query if isinstance(query, AnalyzedQuery) else analyze(query)
    config = config or OracleConfig()
    per = [oracle_pattern(aq, i, graph, config) for i in range(len(aq.ast.patterns))]
    columns = aq.columns
    found = []
    for combo in itertools.product(*per):
        merged: dict = {}
        clash = False
        for r in combo:
            for name, v in r.values.items():
                if isinstance(v, (list, Path)) or name not in merged:
                    merged[name] = v
                elif merged[name] != v:
                    clash = True
        if clash:
            continue
        scope = {k: (Group(v) if isinstance(v, list) else ElementRef(v) if isinstance(v, str)
                     else v) for k, v in merged.items()}
        if aq.ast.where is not None and \
                eval_bool_expr(aq.ast.where, DictScope(scope), graph) is not True:
            continue
        found.append((combo, merged))
        if len(found) > config.max_rows:
            raise CapExceeded(f"more than {config.max_rows} rows")
    table = ResultTable(columns)
    found.sort(key=lambda f: (tuple(r.path.elements() for r in f[0]),
                              tuple(_cell_order(f[1].get(c)) for c in columns),
                              repr(tuple(r.key for r in f[0]))))
    for combo, merged in found:
        table.rows.append(tuple(merged.get(c) for c in columns))
        table.paths.append(tuple(r.path for r in combo))
        table.keys.append(tuple(r.key for r in combo))
    return table
