"""Typed syntax tree for MATCH statements.

Nodes are frozen dataclasses; source offsets are carried in ``pos`` but take
no part in equality, so a re-parsed tree compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Optional, Union

_pos = field(default=-1, compare=False, repr=False)


# -- label expressions ------------------------------------------------------


@dataclass(frozen=True)
class LabelName:
    name: str


@dataclass(frozen=True)
class LabelWildcard:
    pass


@dataclass(frozen=True)
class LabelNot:
    operand: "LabelExpr"


@dataclass(frozen=True)
class LabelAnd:
    operands: tuple["LabelExpr", ...]


@dataclass(frozen=True)
class LabelOr:
    operands: tuple["LabelExpr", ...]


LabelExpr = Union[LabelName, LabelWildcard, LabelNot, LabelAnd, LabelOr]


def label_matches(expr: Optional[LabelExpr], labels: frozenset[str]) -> bool:
    if expr is None:
        return True
    if isinstance(expr, LabelName):
        return expr.name in labels
    if isinstance(expr, LabelWildcard):
        return bool(labels)
    if isinstance(expr, LabelNot):
        return not label_matches(expr.operand, labels)
    if isinstance(expr, LabelAnd):
        return all(label_matches(o, labels) for o in expr.operands)
    return any(label_matches(o, labels) for o in expr.operands)


# -- value / boolean expressions --------------------------------------------

Scalar = Union[str, int, Decimal, bool, None]


@dataclass(frozen=True)
class Literal:
    value: Scalar

    def __eq__(self, other: object) -> bool:
        # keep TRUE distinct from 1
        return (isinstance(other, Literal) and type(self.value) is type(other.value)
                and self.value == other.value)

    def __hash__(self) -> int:
        return hash((type(self.value), self.value))


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = _pos


@dataclass(frozen=True)
class Prop:
    var: Var
    name: str


@dataclass(frozen=True)
class Aggregate:
    """``fn(arg)``; ``star`` marks ``COUNT(v.*)`` where ``arg`` is the bare ``Var``."""

    fn: str
    arg: "Expr"
    star: bool = False
    pos: int = _pos


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    """Arithmetic (+ - * /) or comparison (= <> < <= > >=)."""

    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    operands: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    operands: tuple["Expr", ...]


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class IsNull:
    operand: "Expr"
    negated: bool = False


@dataclass(frozen=True)
class IsDirected:
    edge: Var
    negated: bool = False


@dataclass(frozen=True)
class IsEndpoint:
    """``node IS SOURCE OF edge`` / ``node IS DESTINATION OF edge``."""

    which: str  # "SOURCE" | "DESTINATION"
    node: Var
    edge: Var
    negated: bool = False


@dataclass(frozen=True)
class ElementPredicate:
    """``SAME(a, b, ...)`` or ``ALL_DIFFERENT(a, b, ...)``."""

    fn: str
    args: tuple[Var, ...]
    pos: int = _pos


Expr = Union[Literal, Var, Prop, Aggregate, Neg, Binary, And, Or, Not, IsNull,
             IsDirected, IsEndpoint, ElementPredicate]

COMPARISONS = ("=", "<>", "<", "<=", ">", ">=")
ARITHMETIC = ("+", "-", "*", "/")
AGGREGATES = ("SUM", "COUNT", "AVG", "MIN", "MAX")


def expr_children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Prop):
        return (e.var,)
    if isinstance(e, Aggregate):
        return (e.arg,)
    if isinstance(e, (Neg, Not)):
        return (e.operand,)
    if isinstance(e, IsNull):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, (And, Or)):
        return e.operands
    if isinstance(e, IsDirected):
        return (e.edge,)
    if isinstance(e, IsEndpoint):
        return (e.node, e.edge)
    if isinstance(e, ElementPredicate):
        return e.args
    return ()


def iter_vars(e: Expr, inside_aggregate: bool = False):
    """Yield ``(Var, inside_aggregate)`` for every variable reference in ``e``."""
    if isinstance(e, Var):
        yield e, inside_aggregate
        return
    if isinstance(e, Aggregate):
        inside_aggregate = True
    for c in expr_children(e):
        yield from iter_vars(c, inside_aggregate)


# -- patterns ---------------------------------------------------------------


class Orientation(str, Enum):
    LEFT = "left"
    UNDIRECTED = "undirected"
    RIGHT = "right"
    LEFT_OR_UNDIRECTED = "left-or-undirected"
    UNDIRECTED_OR_RIGHT = "undirected-or-right"
    LEFT_OR_RIGHT = "left-or-right"
    ANY = "any"

    @property
    def accepts(self) -> frozenset[str]:
        """Traversal kinds accepted: 'L' (against a directed edge), 'U', 'R'."""
        return _ACCEPTS[self]


_ACCEPTS = {
    Orientation.LEFT: frozenset("L"),
    Orientation.UNDIRECTED: frozenset("U"),
    Orientation.RIGHT: frozenset("R"),
    Orientation.LEFT_OR_UNDIRECTED: frozenset("LU"),
    Orientation.UNDIRECTED_OR_RIGHT: frozenset("UR"),
    Orientation.LEFT_OR_RIGHT: frozenset("LR"),
    Orientation.ANY: frozenset("LUR"),
}


@dataclass(frozen=True)
class Quantifier:
    min: int
    max: Optional[int]  # None = unbounded

    @property
    def bounded(self) -> bool:
        return self.max is not None


@dataclass(frozen=True)
class QuestionMark:
    pass


class Restrictor(str, Enum):
    TRAIL = "TRAIL"
    ACYCLIC = "ACYCLIC"
    SIMPLE = "SIMPLE"


@dataclass(frozen=True)
class Selector:
    """``kind`` is one of ANY SHORTEST, ALL SHORTEST, ANY, ANY k, SHORTEST k,
    SHORTEST k GROUP; ``k`` is set for the last three."""

    kind: str
    k: Optional[int] = None

    @property
    def count(self) -> int:
        return self.k if self.k is not None else 1


SELECTOR_KINDS = ("ANY SHORTEST", "ALL SHORTEST", "ANY", "ANY k", "SHORTEST k",
                  "SHORTEST k GROUP")


@dataclass(frozen=True)
class NodePattern:
    var: Optional[str] = None
    label: Optional[LabelExpr] = None
    where: Optional[Expr] = None
    pos: int = _pos


@dataclass(frozen=True)
class EdgePattern:
    orientation: Orientation
    var: Optional[str] = None
    label: Optional[LabelExpr] = None
    where: Optional[Expr] = None
    quantifier: Optional[Quantifier] = None
    pos: int = _pos


@dataclass(frozen=True)
class Concat:
    items: tuple["Term", ...]


@dataclass(frozen=True)
class Union_:
    """Path pattern union ``|`` (set semantics)."""

    items: tuple["Term", ...]
    pos: int = _pos


@dataclass(frozen=True)
class Alternation:
    """Multiset alternation ``|+|``."""

    items: tuple["Term", ...]
    pos: int = _pos


@dataclass(frozen=True)
class Paren:
    inner: "Term"
    where: Optional[Expr] = None
    restrictor: Optional[Restrictor] = None
    quantifier: Optional[Union[Quantifier, QuestionMark]] = None
    pos: int = _pos


Term = Union[NodePattern, EdgePattern, Concat, Union_, Alternation, Paren]


@dataclass(frozen=True)
class PathPattern:
    body: Term
    var: Optional[str] = None
    selector: Optional[Selector] = None
    restrictor: Optional[Restrictor] = None
    pos: int = _pos


@dataclass(frozen=True)
class Query:
    patterns: tuple[PathPattern, ...]
    where: Optional[Expr] = None


def term_children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Concat, Union_, Alternation)):
        return t.items
    if isinstance(t, Paren):
        return (t.inner,)
    return ()


def walk_terms(t: Term):
    yield t
    for c in term_children(t):
        yield from walk_terms(c)


def min_edges(t: Term) -> int:
    """Fewest edges any match of ``t`` can contain."""
    if isinstance(t, NodePattern):
        return 0
    if isinstance(t, EdgePattern):
        return t.quantifier.min if t.quantifier else 1
    if isinstance(t, Concat):
        return sum(min_edges(i) for i in t.items)
    if isinstance(t, (Union_, Alternation)):
        return min(min_edges(i) for i in t.items)
    if isinstance(t.quantifier, QuestionMark):
        return 0
    inner = min_edges(t.inner)
    return inner * t.quantifier.min if t.quantifier else inner
