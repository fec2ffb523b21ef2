"""Value and boolean expressions under three-valued logic.

``None`` stands for both the null value and UNKNOWN. Element variables
evaluate to ``ElementRef``; group variables to ``Group`` (only meaningful
inside an aggregate); path variables to ``Path``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, DivisionByZero, InvalidOperation
from typing import Any, Mapping, Optional, Protocol, Sequence

from ..graph import Path, PropertyGraph
from ..syntax import ast as A


@dataclass(frozen=True)
class ElementRef:
    id: str


class Group(tuple):
    """Element ids bound to a group variable, in path order."""


class Scope(Protocol):
    def lookup(self, name: str) -> Any: ...


class DictScope:
    def __init__(self, values: Mapping[str, Any]):
        self.values = values

    def lookup(self, name: str) -> Any:
        return self.values.get(name)


class _Overlay:
    def __init__(self, base: Scope, name: str, value: Any):
        self.base, self.name, self.value = base, name, value

    def lookup(self, name: str) -> Any:
        return self.value if name == self.name else self.base.lookup(name)


def _numeric(v: Any) -> bool:
    return isinstance(v, (int, Decimal)) and not isinstance(v, bool)


def _comparable(a: Any, b: Any) -> bool:
    if _numeric(a) and _numeric(b):
        return True
    return type(a) is type(b) and isinstance(a, (str, bool))


def compare(op: str, a: Any, b: Any) -> Optional[bool]:
    if a is None or b is None:
        return None
    if isinstance(a, (ElementRef, Path)) or isinstance(b, (ElementRef, Path)):
        if op not in ("=", "<>") or type(a) is not type(b):
            return None
        same = a.id == b.id if isinstance(a, ElementRef) else a.elements() == b.elements()
        return same if op == "=" else not same
    if not _comparable(a, b):
        return None
    return {
        "=": a == b, "<>": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
    }[op]


def arithmetic(op: str, a: Any, b: Any) -> Any:
    if not (_numeric(a) and _numeric(b)):
        return None
    if op == "/":
        try:
            return Decimal(a) / Decimal(b)
        except (DivisionByZero, InvalidOperation):
            return None
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    return a * b


def eval_value(e: A.Expr, scope: Scope, graph: PropertyGraph) -> Any:
    if isinstance(e, A.Literal):
        return e.value
    if isinstance(e, A.Var):
        return scope.lookup(e.name)
    if isinstance(e, A.Prop):
        ref = scope.lookup(e.var.name)
        if not isinstance(ref, ElementRef):
            return None
        return graph.property(ref.id, e.name)
    if isinstance(e, A.Neg):
        v = eval_value(e.operand, scope, graph)
        return -v if _numeric(v) else None
    if isinstance(e, A.Binary):
        a = eval_value(e.left, scope, graph)
        b = eval_value(e.right, scope, graph)
        if e.op in A.COMPARISONS:
            return compare(e.op, a, b)
        return arithmetic(e.op, a, b)
    if isinstance(e, A.Aggregate):
        return _aggregate(e, scope, graph)
    return eval_bool_expr(e, scope, graph)


def _truth(v: Any) -> Optional[bool]:
    return v if isinstance(v, bool) else None


def eval_bool_expr(e: A.Expr, scope: Scope, graph: PropertyGraph) -> Optional[bool]:
    """TRUE, FALSE or UNKNOWN (``None``)."""
    if isinstance(e, A.And):
        vals = [eval_bool_expr(o, scope, graph) for o in e.operands]
        if False in vals:
            return False
        return None if None in vals else True
    if isinstance(e, A.Or):
        vals = [eval_bool_expr(o, scope, graph) for o in e.operands]
        if True in vals:
            return True
        return None if None in vals else False
    if isinstance(e, A.Not):
        v = eval_bool_expr(e.operand, scope, graph)
        return None if v is None else not v
    if isinstance(e, A.IsNull):
        v = eval_value(e.operand, scope, graph)
        return (v is not None) if e.negated else (v is None)
    if isinstance(e, A.IsDirected):
        ref = scope.lookup(e.edge.name)
        if not isinstance(ref, ElementRef) or ref.id not in graph.edges:
            return None
        return graph.edges[ref.id].directed != e.negated
    if isinstance(e, A.IsEndpoint):
        node, edge = scope.lookup(e.node.name), scope.lookup(e.edge.name)
        if not (isinstance(node, ElementRef) and isinstance(edge, ElementRef)):
            return None
        el = graph.edges.get(edge.id)
        if el is None:
            return None
        if not el.directed:
            hit = False
        else:
            end = el.endpoints.src if e.which == "SOURCE" else el.endpoints.dst
            hit = end == node.id
        return hit != e.negated
    if isinstance(e, A.ElementPredicate):
        refs = [scope.lookup(v.name) for v in e.args]
        if not all(isinstance(r, ElementRef) for r in refs):
            return None
        ids = [r.id for r in refs]
        if e.fn == "SAME":
            return len(set(ids)) <= 1
        return len(set(ids)) == len(ids)
    return _truth(eval_value(e, scope, graph))


def _group_var(e: A.Expr, scope: Scope) -> Optional[str]:
    for v, _ in A.iter_vars(e):
        if isinstance(scope.lookup(v.name), Group):
            return v.name
    return None


def _aggregate(e: A.Aggregate, scope: Scope, graph: PropertyGraph) -> Any:
    name = _group_var(e.arg, scope)
    if name is None:
        return None
    group = scope.lookup(name)
    if e.star:
        return len(group)
    values = [eval_value(e.arg, _Overlay(scope, name, ElementRef(i)), graph) for i in group]
    return eval_aggregate(e.fn, values)


def eval_aggregate(fn: str, values: Sequence[Any]) -> Any:
    """Aggregate a group's values; nulls are skipped."""
    vals = [v for v in values if v is not None]
    if fn == "COUNT":
        return len(vals)
    if not vals:
        return None
    if fn in ("SUM", "AVG"):
        if not all(_numeric(v) for v in vals):
            return None
        total = sum(vals)
        return total if fn == "SUM" else Decimal(total) / len(vals)
    if not all(_comparable(vals[0], v) for v in vals):
        return None
    return min(vals) if fn == "MIN" else max(vals)


def passes(e: Optional[A.Expr], scope: Scope, graph: PropertyGraph) -> bool:
    """Rows survive a WHERE only when it evaluates to TRUE."""
    return e is None or eval_bool_expr(e, scope, graph) is True

