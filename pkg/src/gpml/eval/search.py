"""Layered matching for path patterns under a selector.

Plain matching enumerates every walk up to the expansion bound, which grows
exponentially with the bound. A selector only ever keeps a few paths per
partition, so this matcher advances all partial matches one edge at a time and
drops those that cannot be selected.

After each edge a partial match has a *configuration*: its position in the
pattern (including exact iteration counts), current and start node, the
bindings later predicates can still see, pending predicates, branch tags and
the sub-path of any open restrictor scope. Two partial matches with equal
configurations accept exactly the same continuations. The selector ranking
(length, then element ids, then layout) is preserved when the same
continuation is appended to both, so per configuration it suffices to keep
the k best (ANY, SHORTEST k), the shortest (ALL SHORTEST) or those among the
k smallest lengths (SHORTEST k GROUP). Predicates that aggregate over group
variables see the whole prefix, so such patterns fall back to plain matching.
"""

from __future__ import annotations

from typing import Iterator, Mapping

from ..graph import PropertyGraph
from ..syntax import ast as A
from .expand import (CloseScope, EdgeEvent, OpenScope, Predicate, Tag, _chain,
                     _events_for_slot)
from .match import GraphSink, PathBinding, _State
from .normalize import Group, NEdge, NormalizedPattern, Slot

TOP = None  # sequence id of the pattern body


def prunable(np: NormalizedPattern) -> bool:
    """True when no predicate inside the pattern aggregates over a group."""
    def has_aggregate(e) -> bool:
        return e is not None and any(inside for _, inside in A.iter_vars(e))

    def visit(seq) -> bool:
        for item in seq:
            if isinstance(item, Slot):
                if any(has_aggregate(n.pattern.where) for n in item.nodes):
                    return False
            elif isinstance(item, NEdge):
                if has_aggregate(item.pattern.where):
                    return False
            else:
                if has_aggregate(item.where) or not all(visit(b) for b in item.branches):
                    return False
        return True

    return np.selector is not None and visit(np.seq)


class _Machine:
    """The walker of ``expand`` with an explicit control stack.

    A control is a tuple of frames, outermost first: ``("s", seq_id, i)`` is
    position ``i`` of a sequence and ``("g", group_id, n)`` is iteration ``n``
    of a group. The sequence of branch ``b`` of group ``g`` has id ``(g, b)``.
    """

    def __init__(self, np: NormalizedPattern, bounds: dict[int, int], sink: GraphSink):
        self.np, self.bounds, self.sink = np, bounds, sink
        self.seqs = {TOP: np.seq}
        self.groups: dict[int, Group] = {}
        for g in np.groups():
            self.groups[g.id] = g
            for b, branch in enumerate(g.branches):
                self.seqs[(g.id, b)] = branch
        self.tail = [CloseScope(np.restrictor)] if np.restrictor else []

    def vector(self, control) -> tuple:
        return tuple(f[2] for f in control if f[0] == "g" and self.groups[f[1]].counted)

    def clip(self, control) -> tuple:
        out = []
        for f in control:
            if f[0] == "g":
                g = self.groups[f[1]]
                if g.max is None and f[2] > g.min:
                    f = ("g", f[1], g.min)
            out.append(f)
        return tuple(out)

    def start(self) -> Iterator:
        head = [OpenScope(self.np.restrictor)] if self.np.restrictor else []
        for s in _chain(self.sink, [self.sink.start()], head):
            yield from self.advance((("s", TOP, 0),), s)

    def advance(self, control, st: _State) -> Iterator:
        """Run to the next edge; yields ``("edge", control, states)`` with the
        states after that edge, or ``("done", binding)``."""
        _, sid, i = control[-1]
        seq = self.seqs[sid]
        if i == len(seq):
            if len(control) == 1:
                for s in _chain(self.sink, [st], self.tail):
                    for b in self.sink.finish(s):
                        yield "done", b
                return
            _, gid, n = control[-2]
            g = self.groups[gid]
            closing = []
            if g.restrictor is not None:
                closing.append(CloseScope(g.restrictor))
            if g.where is not None:
                closing.append(Predicate(g.where, self.vector(control)))
            for s in _chain(self.sink, [st], closing):
                yield from self.iterate(control[:-2], g, n, s)
            return
        item = seq[i]
        nxt = control[:-1] + (("s", sid, i + 1),)
        vector = self.vector(control)
        if isinstance(item, Slot):
            for s in _chain(self.sink, [st], _events_for_slot(item, vector)):
                yield from self.advance(nxt, s)
        elif isinstance(item, NEdge):
            events = [EdgeEvent(item, vector)]
            if item.pattern.where is not None:
                events.append(Predicate(item.pattern.where, vector))
            yield "edge", nxt, list(_chain(self.sink, [st], events))
        else:
            yield from self.iterate(control, item, 0, st)

    def iterate(self, control, g: Group, n: int, st: _State) -> Iterator:
        """``control`` ends at the sequence position holding ``g``."""
        hi = self.bounds.get(g.id, g.max if g.max is not None else g.min)
        if n >= g.min:
            _, sid, i = control[-1]
            yield from self.advance(control[:-1] + (("s", sid, i + 1),), st)
        if n >= hi:
            return
        for b in range(len(g.branches)):
            opening = []
            if g.alternation is not None:
                opening.append(Tag(g.alternation, b))
            if g.restrictor is not None:
                opening.append(OpenScope(g.restrictor))
            inner = control + (("g", g.id, n + 1), ("s", (g.id, b), 0))
            for s in _chain(self.sink, [st], opening):
                yield from self.advance(inner, s)


def _config(machine: _Machine, control, st: _State, vector: tuple) -> tuple:
    # Past its minimum, an unbounded group accepts the same continuations
    # whatever its count, so the count is clipped. Pending predicates may
    # carry vectors of finished iterations; then exact counts are kept.
    if not st.pending:
        control = machine.clip(control)
    clipped = machine.vector(control)
    visible = frozenset(((name, clipped[:len(v)]), el) for (name, v), el in st.env.items()
                        if vector[:len(v)] == v)
    scoped = ()
    if st.scopes:
        _, ni, ei = st.scopes[0]
        scoped = (tuple((r, a - ni, b - ei) for r, a, b in st.scopes),
                  st.nodes[ni:], st.edges[ei:])
    return control, st.node, st.nodes[0], visible, st.pending, st.tags, scoped


def _rank(st: _State) -> tuple:
    elements = []
    layout = []
    for i, n in enumerate(st.nodes):
        elements.append(n)
        layout.append(st.node_names[i])
        if i < len(st.edges):
            elements.append(st.edges[i])
            layout.append((st.edge_names[i] or "",))
    return tuple(elements), tuple(layout), st.tags


class _Keeper:
    """Per-configuration record of the partial matches kept so far."""

    def __init__(self, selector: A.Selector):
        self.kind = selector.kind
        self.k = selector.count
        self.seen: dict[tuple, tuple[set, list]] = {}

    def admit(self, config, length: int, key) -> bool:
        keys, lengths = self.seen.setdefault(config, (set(), []))
        if key in keys:
            return False
        if self.kind == "ALL SHORTEST":
            ok = not lengths or lengths[0] == length
        elif self.kind == "SHORTEST k GROUP":
            ok = length in lengths or len(lengths) < self.k
        else:
            ok = len(keys) < self.k
        if ok:
            keys.add(key)
            if length not in lengths:
                lengths.append(length)
        return ok


def match_selective(np: NormalizedPattern, graph: PropertyGraph, bounds: dict[int, int],
                    depth: Mapping[str, int]) -> Iterator[PathBinding]:
    """Path bindings of ``np`` that its selector may pick, plus possibly some
    it will not; selecting from these equals selecting from all matches."""
    machine = _Machine(np, bounds, GraphSink(graph, depth))
    keeper = _Keeper(np.selector)
    moves = list(machine.start())
    length = 0
    while moves:
        length += 1
        layer = []
        for move in moves:
            if move[0] == "done":
                yield move[1]
                continue
            _, control, states = move
            vector = machine.vector(control)
            for st in states:
                layer.append((_rank(st), control, st, vector))
        layer.sort(key=lambda x: x[0])
        moves = []
        for rank, control, st, vector in layer:
            if keeper.admit(_config(machine, control, st, vector), length, rank[:2]):
                moves.extend(machine.advance(control, st))
