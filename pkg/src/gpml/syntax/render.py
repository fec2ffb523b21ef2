"""Canonical text for syntax trees; ``parse(render(t)) == t``."""

from __future__ import annotations

from decimal import Decimal

from . import ast as A

_OPENERS = {
    A.Orientation.LEFT: ("<-[", "]-"),
    A.Orientation.UNDIRECTED: ("~[", "]~"),
    A.Orientation.RIGHT: ("-[", "]->"),
    A.Orientation.LEFT_OR_UNDIRECTED: ("<~[", "]~"),
    A.Orientation.UNDIRECTED_OR_RIGHT: ("~[", "]~>"),
    A.Orientation.LEFT_OR_RIGHT: ("<-[", "]->"),
    A.Orientation.ANY: ("-[", "]-"),
}

_ABBREVIATIONS = {
    A.Orientation.LEFT: "<-",
    A.Orientation.UNDIRECTED: "~",
    A.Orientation.RIGHT: "->",
    A.Orientation.LEFT_OR_UNDIRECTED: "<~",
    A.Orientation.UNDIRECTED_OR_RIGHT: "~>",
    A.Orientation.LEFT_OR_RIGHT: "<->",
    A.Orientation.ANY: "-",
}

# binding strength; a child weaker than its context gets parentheses
_OR, _AND, _NOT, _CMP, _ADD, _MUL, _NEG, _ATOM = range(1, 9)


def render(node) -> str:
    if isinstance(node, A.Query):
        text = "MATCH " + ", ".join(render(p) for p in node.patterns)
        if node.where is not None:
            text += " WHERE " + render_expr(node.where)
        return text
    if isinstance(node, A.PathPattern):
        head = []
        if node.selector is not None:
            head.append(render_selector(node.selector))
        if node.restrictor is not None:
            head.append(node.restrictor.value)
        if node.var is not None:
            head.append(f"{node.var} =")
        return " ".join(head + [render_term(node.body)])
    if isinstance(node, (A.NodePattern, A.EdgePattern, A.Concat, A.Union_,
                         A.Alternation, A.Paren)):
        return render_term(node)
    if isinstance(node, (A.LabelName, A.LabelWildcard, A.LabelNot, A.LabelAnd, A.LabelOr)):
        return render_label(node)
    return render_expr(node)


def render_selector(s: A.Selector) -> str:
    return s.kind.replace("k", str(s.k)) if s.k is not None else s.kind


def render_quantifier(q) -> str:
    if q is None:
        return ""
    if isinstance(q, A.QuestionMark):
        return "?"
    if q.max is None:
        return {0: "*", 1: "+"}.get(q.min, f"{{{q.min},}}")
    return f"{{{q.min},{q.max}}}"


def _spec(var, label, where) -> str:
    text = var or ""
    if label is not None:
        text += ":" + render_label(label)
    if where is not None:
        text += (" " if text else "") + "WHERE " + render_expr(where)
    return text


def render_term(t: A.Term) -> str:
    if isinstance(t, A.NodePattern):
        return "(" + _spec(t.var, t.label, t.where) + ")"
    if isinstance(t, A.EdgePattern):
        if t.var is None and t.label is None and t.where is None:
            body = _ABBREVIATIONS[t.orientation]
        else:
            left, right = _OPENERS[t.orientation]
            body = left + _spec(t.var, t.label, t.where) + right
        return body + render_quantifier(t.quantifier)
    if isinstance(t, A.Concat):
        return " ".join(render_term(i) for i in t.items)
    if isinstance(t, A.Union_):
        return " | ".join(render_term(i) for i in t.items)
    if isinstance(t, A.Alternation):
        return " |+| ".join(render_term(i) for i in t.items)
    inner = render_term(t.inner)
    if t.restrictor is not None:
        inner = f"{t.restrictor.value} {inner}"
    if t.where is not None:
        inner += " WHERE " + render_expr(t.where)
    return "[" + inner + "]" + render_quantifier(t.quantifier)


def render_label(e: A.LabelExpr, nested: bool = False) -> str:
    if isinstance(e, A.LabelName):
        return e.name
    if isinstance(e, A.LabelWildcard):
        return "%"
    if isinstance(e, A.LabelNot):
        return "!" + render_label(e.operand, True)
    sep = "&" if isinstance(e, A.LabelAnd) else "|"
    text = sep.join(render_label(o, True) for o in e.operands)
    return f"({text})" if nested else text


def _literal(v) -> str:
    if v is None:
        return "NULL"
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, Decimal):
        return format(v, "f")
    if isinstance(v, int):
        return str(v)
    return "'" + v.replace("'", "''") + "'"


def _strength(e: A.Expr) -> int:
    if isinstance(e, A.Or):
        return _OR
    if isinstance(e, A.And):
        return _AND
    if isinstance(e, A.Not):
        return _NOT
    if isinstance(e, (A.IsNull, A.IsDirected, A.IsEndpoint)):
        return _CMP
    if isinstance(e, A.Binary):
        if e.op in A.COMPARISONS:
            return _CMP
        return _ADD if e.op in ("+", "-") else _MUL
    if isinstance(e, A.Neg):
        return _NEG
    return _ATOM


def render_expr(e: A.Expr, context: int = 0) -> str:
    text = _render_expr(e)
    return f"({text})" if _strength(e) < context else text


def _render_expr(e: A.Expr) -> str:
    if isinstance(e, A.Literal):
        return _literal(e.value)
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.Prop):
        return f"{e.var.name}.{e.name}"
    if isinstance(e, A.Aggregate):
        arg = f"{e.arg.name}.*" if e.star else render_expr(e.arg)
        return f"{e.fn}({arg})"
    if isinstance(e, A.ElementPredicate):
        return f"{e.fn}({', '.join(a.name for a in e.args)})"
    if isinstance(e, A.Or):
        return " OR ".join(render_expr(o, _AND) for o in e.operands)
    if isinstance(e, A.And):
        return " AND ".join(render_expr(o, _NOT) for o in e.operands)
    if isinstance(e, A.Not):
        return "NOT " + render_expr(e.operand, _NOT)
    if isinstance(e, A.Neg):
        return "-" + render_expr(e.operand, _NEG)
    if isinstance(e, A.IsNull):
        return render_expr(e.operand, _ADD) + (" IS NOT NULL" if e.negated else " IS NULL")
    if isinstance(e, A.IsDirected):
        return e.edge.name + (" IS NOT DIRECTED" if e.negated else " IS DIRECTED")
    if isinstance(e, A.IsEndpoint):
        neg = "NOT " if e.negated else ""
        return f"{e.node.name} IS {neg}{e.which} OF {e.edge.name}"
    s = _strength(e)
    if s == _CMP:
        return f"{render_expr(e.left, _ADD)} {e.op} {render_expr(e.right, _ADD)}"
    return f"{render_expr(e.left, s)} {e.op} {render_expr(e.right, s + 1)}"
