"""Recursive-descent parser for MATCH statements.

Grammar::

    query       := MATCH pathPattern ("," pathPattern)* [WHERE expr]
    pathPattern := [selector] [restrictor] [ident "="] patternExpr
    patternExpr := seq (("|" | "|+|") seq)*        -- one operator kind per level
    seq         := term+
    term        := node | edge [quantifier] | paren [quantifier | "?"]
    paren       := ("(" | "[") [restrictor] patternExpr [WHERE expr] (")" | "]")
    node        := "(" [ident] [":" labelExpr] [WHERE expr] ")"

A "(" opens a parenthesized pattern when the next token starts a term or is a
restrictor; otherwise it is a node pattern.
"""

from __future__ import annotations

from typing import Optional

from ..errors import ParseError
from . import ast as A
from .lexer import EDGE_ABBREVIATIONS, EDGE_CLOSERS, EDGE_OPENERS, Token, tokenize

_FULL_EDGES = {
    ("<-[", "]-"): A.Orientation.LEFT,
    ("~[", "]~"): A.Orientation.UNDIRECTED,
    ("-[", "]->"): A.Orientation.RIGHT,
    ("<~[", "]~"): A.Orientation.LEFT_OR_UNDIRECTED,
    ("~[", "]~>"): A.Orientation.UNDIRECTED_OR_RIGHT,
    ("<-[", "]->"): A.Orientation.LEFT_OR_RIGHT,
    ("-[", "]-"): A.Orientation.ANY,
}

_ABBREVIATED = {
    "<-": A.Orientation.LEFT,
    "~": A.Orientation.UNDIRECTED,
    "->": A.Orientation.RIGHT,
    "<~": A.Orientation.LEFT_OR_UNDIRECTED,
    "~>": A.Orientation.UNDIRECTED_OR_RIGHT,
    "<->": A.Orientation.LEFT_OR_RIGHT,
    "-": A.Orientation.ANY,
}

_RESTRICTORS = {"TRAIL", "ACYCLIC", "SIMPLE"}
_CMP_OPS = set(A.COMPARISONS)


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token plumbing --

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, expected: str) -> ParseError:
        return ParseError(self.tok.start, expected, self.text)

    def sym(self, value: str) -> bool:
        return self.tok.is_("SYMBOL", value)

    def kw(self, value: str) -> bool:
        return self.tok.is_("KEYWORD", value)

    def accept_sym(self, value: str) -> bool:
        if self.sym(value):
            self.advance()
            return True
        return False

    def accept_kw(self, value: str) -> bool:
        if self.kw(value):
            self.advance()
            return True
        return False

    def expect_sym(self, value: str) -> Token:
        if not self.sym(value):
            raise self.error(f"'{value}'")
        return self.advance()

    def expect_kw(self, value: str) -> Token:
        if not self.kw(value):
            raise self.error(value)
        return self.advance()

    def split(self, head: str) -> None:
        """Split the current symbol token after its first ``len(head)`` chars."""
        t = self.tok
        cut = t.start + len(head)
        rest = Token("SYMBOL", t.value[len(head):], cut, t.end)
        self.toks[self.i:self.i + 1] = [Token("SYMBOL", head, t.start, cut), rest]

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "IDENT":
            raise self.error(what)
        return self.advance().value

    # -- statements --

    def query(self) -> A.Query:
        self.expect_kw("MATCH")
        patterns = [self.path_pattern()]
        while self.accept_sym(","):
            patterns.append(self.path_pattern())
        where = self.expr() if self.accept_kw("WHERE") else None
        if self.tok.kind != "EOF":
            raise self.error("end of query")
        return A.Query(tuple(patterns), where)

    def path_pattern(self) -> A.PathPattern:
        pos = self.tok.start
        selector = self.selector()
        restrictor = self.restrictor()
        var = None
        if self.tok.kind == "IDENT" and self.peek().is_("SYMBOL", "="):
            var = self.advance().value
            self.advance()
        body = self.pattern_expr()
        return A.PathPattern(body, var, selector, restrictor, pos)

    def selector(self) -> Optional[A.Selector]:
        if self.accept_kw("ANY"):
            if self.accept_kw("SHORTEST"):
                return A.Selector("ANY SHORTEST")
            if self.tok.kind == "INT":
                return A.Selector("ANY k", self.count())
            return A.Selector("ANY")
        if self.accept_kw("ALL"):
            self.expect_kw("SHORTEST")
            return A.Selector("ALL SHORTEST")
        if self.accept_kw("SHORTEST"):
            k = self.count()
            if self.accept_kw("GROUP"):
                return A.Selector("SHORTEST k GROUP", k)
            return A.Selector("SHORTEST k", k)
        return None

    def count(self) -> int:
        if self.tok.kind != "INT" or self.tok.value < 1:
            raise self.error("positive integer")
        return self.advance().value

    def restrictor(self) -> Optional[A.Restrictor]:
        if self.tok.kind == "KEYWORD" and self.tok.value in _RESTRICTORS:
            return A.Restrictor(self.advance().value)
        return None

    # -- patterns --

    def pattern_expr(self) -> A.Term:
        pos = self.tok.start
        items = [self.seq()]
        op = None
        while self.sym("|") or self.sym("|+|"):
            if op is not None and self.tok.value != op:
                raise self.error(f"'{op}' (bracket to mix '|' and '|+|')")
            op = self.advance().value
            items.append(self.seq())
        if op is None:
            return items[0]
        cls = A.Union_ if op == "|" else A.Alternation
        return cls(tuple(items), pos)

    def starts_term(self) -> bool:
        t = self.tok
        return t.kind == "SYMBOL" and (
            t.value in ("(", "[") or t.value in EDGE_OPENERS or t.value in EDGE_ABBREVIATIONS)

    def seq(self) -> A.Term:
        if not self.starts_term():
            raise self.error("node, edge or parenthesized pattern")
        items = []
        while self.starts_term():
            items.append(self.term())
        return items[0] if len(items) == 1 else A.Concat(tuple(items))

    def term(self) -> A.Term:
        t = self.tok
        if t.value == "(":
            nxt = self.peek()
            group = nxt.kind == "SYMBOL" and (
                nxt.value in ("(", "[") or nxt.value in EDGE_OPENERS
                or nxt.value in EDGE_ABBREVIATIONS)
            group = group or (nxt.kind == "KEYWORD" and nxt.value in _RESTRICTORS)
            return self.paren() if group else self.node()
        if t.value == "[":
            return self.paren()
        if t.value in EDGE_OPENERS:
            return self.full_edge()
        return self.abbreviated_edge()

    def node(self) -> A.NodePattern:
        pos = self.expect_sym("(").start
        var, label, where = self.element_spec()
        if not self.sym(")"):
            raise self.error("')'")
        self.advance()
        return A.NodePattern(var, label, where, pos)

    def element_spec(self):
        var = self.advance().value if self.tok.kind == "IDENT" else None
        label = self.label_expr() if self.accept_sym(":") else None
        where = self.expr() if self.accept_kw("WHERE") else None
        return var, label, where

    def full_edge(self) -> A.EdgePattern:
        opener = self.advance()
        var, label, where = self.element_spec()
        closer = self.tok
        if not (closer.kind == "SYMBOL" and closer.value in EDGE_CLOSERS):
            raise self.error("edge closer")
        orientation = _FULL_EDGES.get((opener.value, closer.value))
        if orientation is None:
            raise self.error(f"edge closer matching '{opener.value}'")
        self.advance()
        return A.EdgePattern(orientation, var, label, where, self.quantifier(), opener.start)

    def abbreviated_edge(self) -> A.EdgePattern:
        t = self.advance()
        return A.EdgePattern(_ABBREVIATED[t.value], quantifier=self.quantifier(), pos=t.start)

    def quantifier(self) -> Optional[A.Quantifier]:
        if self.accept_sym("*"):
            return A.Quantifier(0, None)
        if self.accept_sym("+"):
            return A.Quantifier(1, None)
        if not self.sym("{"):
            return None
        self.advance()
        if self.tok.kind != "INT":
            raise self.error("integer")
        lo = self.advance().value
        hi: Optional[int] = lo
        if self.accept_sym(","):
            hi = self.advance().value if self.tok.kind == "INT" else None
        if hi is not None and hi < lo:
            raise self.error(f"upper bound >= {lo}")
        self.expect_sym("}")
        return A.Quantifier(lo, hi)

    def paren(self) -> A.Paren:
        open_tok = self.advance()
        close = ")" if open_tok.value == "(" else "]"
        restrictor = self.restrictor()
        inner = self.pattern_expr()
        where = self.expr() if self.accept_kw("WHERE") else None
        t = self.tok
        if close == "]" and t.kind == "SYMBOL" and t.value in EDGE_CLOSERS:
            # "]-(b)": bracket close followed by an abbreviated edge
            self.split("]")
        self.expect_sym(close)
        if self.accept_sym("?"):
            quant: Optional[A.Quantifier | A.QuestionMark] = A.QuestionMark()
        else:
            quant = self.quantifier()
        return A.Paren(inner, where, restrictor, quant, open_tok.start)

    # -- label expressions --

    def label_expr(self) -> A.LabelExpr:
        items = [self.label_and()]
        while self.accept_sym("|"):
            items.append(self.label_and())
        return items[0] if len(items) == 1 else A.LabelOr(tuple(items))

    def label_and(self) -> A.LabelExpr:
        items = [self.label_not()]
        while self.accept_sym("&"):
            items.append(self.label_not())
        return items[0] if len(items) == 1 else A.LabelAnd(tuple(items))

    def label_not(self) -> A.LabelExpr:
        if self.accept_sym("!"):
            return A.LabelNot(self.label_not())
        if self.accept_sym("%"):
            return A.LabelWildcard()
        if self.accept_sym("("):
            inner = self.label_expr()
            self.expect_sym(")")
            return inner
        return A.LabelName(self.ident("label"))

    # -- expressions --

    def expr(self) -> A.Expr:
        items = [self.and_expr()]
        while self.accept_kw("OR"):
            items.append(self.and_expr())
        return items[0] if len(items) == 1 else A.Or(tuple(items))

    def and_expr(self) -> A.Expr:
        items = [self.not_expr()]
        while self.accept_kw("AND"):
            items.append(self.not_expr())
        return items[0] if len(items) == 1 else A.And(tuple(items))

    def not_expr(self) -> A.Expr:
        if self.accept_kw("NOT"):
            return A.Not(self.not_expr())
        return self.predicate()

    def predicate(self) -> A.Expr:
        left = self.additive()
        t = self.tok
        if t.kind == "SYMBOL" and t.value in ("<-", "<->", "<~"):
            # "x<-1" lexes as an arrow; here it is "<" followed by a sign
            self.split("<")
            t = self.tok
        if t.kind == "SYMBOL" and t.value in _CMP_OPS:
            op = self.advance().value
            return A.Binary(op, left, self.additive())
        if self.accept_kw("IS"):
            negated = self.accept_kw("NOT")
            if self.accept_kw("NULL"):
                return A.IsNull(left, negated)
            if not isinstance(left, A.Var):
                raise self.error("NULL")
            if self.accept_kw("DIRECTED"):
                return A.IsDirected(left, negated)
            for which in ("SOURCE", "DESTINATION"):
                if self.accept_kw(which):
                    self.expect_kw("OF")
                    pos = self.tok.start
                    return A.IsEndpoint(which, left, A.Var(self.ident(), pos), negated)
            raise self.error("NULL, DIRECTED, SOURCE or DESTINATION")
        return left

    def additive(self) -> A.Expr:
        left = self.multiplicative()
        while self.sym("+") or self.sym("-"):
            op = self.advance().value
            left = A.Binary(op, left, self.multiplicative())
        return left

    def multiplicative(self) -> A.Expr:
        left = self.unary()
        while self.sym("*") or self.sym("/"):
            op = self.advance().value
            left = A.Binary(op, left, self.unary())
        return left

    def unary(self) -> A.Expr:
        if self.accept_sym("-"):
            return A.Neg(self.unary())
        return self.primary()

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind in ("INT", "DECIMAL", "STRING"):
            self.advance()
            return A.Literal(t.value)
        if t.kind == "KEYWORD":
            if t.value in ("TRUE", "FALSE", "NULL"):
                self.advance()
                return A.Literal({"TRUE": True, "FALSE": False, "NULL": None}[t.value])
            if t.value in A.AGGREGATES:
                return self.aggregate()
            if t.value in ("SAME", "ALL_DIFFERENT"):
                self.advance()
                self.expect_sym("(")
                args = [self.var()]
                while self.accept_sym(","):
                    args.append(self.var())
                self.expect_sym(")")
                return A.ElementPredicate(t.value, tuple(args), t.start)
        if t.kind == "IDENT":
            v = self.var()
            if self.accept_sym("."):
                name = self.tok
                if name.kind not in ("IDENT", "KEYWORD"):
                    raise self.error("property name")
                self.advance()
                return A.Prop(v, self.text[name.start:name.end])
            return v
        if self.accept_sym("("):
            inner = self.expr()
            self.expect_sym(")")
            return inner
        raise self.error("expression")

    def var(self) -> A.Var:
        pos = self.tok.start
        return A.Var(self.ident("variable"), pos)

    def aggregate(self) -> A.Aggregate:
        t = self.advance()
        self.expect_sym("(")
        if (t.value == "COUNT" and self.tok.kind == "IDENT"
                and self.peek().is_("SYMBOL", ".") and self.peek(2).is_("SYMBOL", "*")):
            v = self.var()
            self.advance()
            self.advance()
            self.expect_sym(")")
            return A.Aggregate("COUNT", v, True, t.start)
        arg = self.expr()
        self.expect_sym(")")
        return A.Aggregate(t.value, arg, False, t.start)


def parse(text: str) -> A.Query:
    """Parse a MATCH statement; raises ``ParseError``/``LexError`` on bad input."""
    return Parser(text).query()
