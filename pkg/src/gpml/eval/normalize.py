"""Canonical form of a path pattern.

A normalized sequence alternates node slots and connectors::

    slot (edge | group) slot (edge | group) ... slot

A slot holds the node patterns that bind the same graph node (adjacent node
patterns in the source, or a fresh anonymous one). A group starts and ends
at the slots that flank it, so a group with zero iterations leaves its two
neighbouring slots on one node. Quantified edges become single-edge groups,
``+`` and ``*`` become ``{1,}`` and ``{0,}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from ..syntax import ast as A
from ..syntax.render import render_expr, render_label


@dataclass
class NNode:
    pattern: A.NodePattern
    anon: Optional[str] = None  # fresh name when the source has no variable

    @property
    def var(self) -> Optional[str]:
        return self.pattern.var


@dataclass
class NEdge:
    pattern: A.EdgePattern
    anon: Optional[str] = None

    @property
    def var(self) -> Optional[str]:
        return self.pattern.var


@dataclass
class Slot:
    nodes: list[NNode]


@dataclass
class Group:
    branches: list[list]  # each a normalized sequence
    min: int = 1
    max: Optional[int] = 1
    counted: bool = False  # a real quantifier: adds an iteration index
    optional: bool = False  # written with "?"
    alternation: Optional[int] = None  # ordinal of the |+| this group realises
    restrictor: Optional[A.Restrictor] = None
    where: Optional[A.Expr] = None
    source: object = None
    id: int = field(default=0)


Seq = list  # of Slot | NEdge | Group


@dataclass
class NormalizedPattern:
    seq: Seq
    selector: Optional[A.Selector]
    restrictor: Optional[A.Restrictor]
    var: Optional[str]
    source: A.PathPattern

    def groups(self):
        yield from _groups(self.seq)


def _groups(seq):
    for item in seq:
        if isinstance(item, Group):
            yield item
            for b in item.branches:
                yield from _groups(b)


class _Normalizer:
    def __init__(self, body: A.Term):
        self.node_ids = itertools.count(1)
        self.edge_ids = itertools.count(1)
        self.group_ids = itertools.count(1)
        alts = [t for t in A.walk_terms(body) if isinstance(t, A.Alternation)]
        self.alt_ordinal = {id(t): i for i, t in enumerate(alts)}

    def anon_slot(self) -> Slot:
        return Slot([NNode(A.NodePattern(), f"_n{next(self.node_ids)}")])

    def node(self, n: A.NodePattern) -> NNode:
        return NNode(n, None if n.var else f"_n{next(self.node_ids)}")

    def edge(self, e: A.EdgePattern) -> NEdge:
        return NEdge(e, None if e.var else f"_e{next(self.edge_ids)}")

    def group_of(self, inner: A.Term, **kw) -> Group:
        g = Group([], id=next(self.group_ids), **kw)
        if isinstance(inner, (A.Union_, A.Alternation)):
            if isinstance(inner, A.Alternation):
                g.alternation = self.alt_ordinal[id(inner)]
            g.branches = [self.seq(i) for i in inner.items]
        else:
            g.branches = [self.seq(inner)]
        return g

    def connector(self, t: A.Term):
        if isinstance(t, A.EdgePattern):
            if t.quantifier is None:
                return self.edge(t)
            q = t.quantifier
            g = Group([], q.min, q.max, counted=True, source=t, id=next(self.group_ids))
            g.branches = [[self.anon_slot(), self.edge(t), self.anon_slot()]]
            return g
        if isinstance(t, A.Paren):
            q = t.quantifier
            kw = dict(restrictor=t.restrictor, where=t.where, source=t)
            if isinstance(q, A.QuestionMark):
                kw.update(min=0, max=1, optional=True)
            elif q is not None:
                kw.update(min=q.min, max=q.max, counted=True)
            return self.group_of(t.inner, **kw)
        return self.group_of(t, source=t)  # bare union at pattern level

    def seq(self, t: A.Term) -> Seq:
        items = t.items if isinstance(t, A.Concat) else (t,)
        out: Seq = []
        for it in items:
            if isinstance(it, A.NodePattern):
                if out and isinstance(out[-1], Slot):
                    out[-1].nodes.append(self.node(it))
                else:
                    out.append(Slot([self.node(it)]))
                continue
            if not out or not isinstance(out[-1], Slot):
                out.append(self.anon_slot())
            out.append(self.connector(it))
        if not isinstance(out[-1], Slot):
            out.append(self.anon_slot())
        return out


def normalize(pp: A.PathPattern) -> NormalizedPattern:
    n = _Normalizer(pp.body)
    if isinstance(pp.body, (A.Union_, A.Alternation)):
        seq = [n.anon_slot(), n.connector(pp.body), n.anon_slot()]
    else:
        seq = n.seq(pp.body)
    return NormalizedPattern(seq, pp.selector, pp.restrictor, pp.var, pp)


# -- display ----------------------------------------------------------------


def _spec(var, label, where) -> str:
    text = var or ""
    if label is not None:
        text += ":" + render_label(label)
    if where is not None:
        text += " WHERE " + render_expr(where)
    return text


_ARROWS = {
    A.Orientation.LEFT: ("<-[", "]-"), A.Orientation.UNDIRECTED: ("~[", "]~"),
    A.Orientation.RIGHT: ("-[", "]->"), A.Orientation.LEFT_OR_UNDIRECTED: ("<~[", "]~"),
    A.Orientation.UNDIRECTED_OR_RIGHT: ("~[", "]~>"),
    A.Orientation.LEFT_OR_RIGHT: ("<-[", "]->"), A.Orientation.ANY: ("-[", "]-"),
}


def render_seq(seq: Seq) -> str:
    """Display form; an all-anonymous slot next to a bracketed group is left out."""
    parts = []
    for i, item in enumerate(seq):
        if isinstance(item, Slot):
            near_group = any(isinstance(seq[j], Group) for j in (i - 1, i + 1)
                             if 0 <= j < len(seq))
            if near_group and all(n.var is None and n.pattern.label is None
                                  and n.pattern.where is None for n in item.nodes):
                continue
            parts += ["(" + _spec(n.var or n.anon, n.pattern.label, n.pattern.where) + ")"
                      for n in item.nodes]
        elif isinstance(item, NEdge):
            p = item.pattern
            left, right = _ARROWS[p.orientation]
            parts.append(left + _spec(p.var or item.anon, p.label, p.where) + right)
        else:
            parts.append(render_group(item))
    return " ".join(parts)


def render_group(g: Group) -> str:
    sep = " |+| " if g.alternation is not None else " | "
    inner = sep.join(render_seq(b) if len(g.branches) == 1 else f"[{render_seq(b)}]"
                     for b in g.branches)
    if g.restrictor is not None:
        inner = f"{g.restrictor.value} {inner}"
    if g.where is not None:
        inner += " WHERE " + render_expr(g.where)
    if g.optional:
        suffix = "?"
    elif g.counted:
        suffix = f"{{{g.min},{'' if g.max is None else g.max}}}"
    else:
        suffix = ""
    return f"[{inner}]{suffix}"


def render_normalized(np: NormalizedPattern) -> str:
    return render_seq(np.seq)


Connector = Union[NEdge, Group]
