import random
from decimal import Decimal

import pytest

import queries
from fuzzgen import random_tree
from gpml.errors import LexError, ParseError
from gpml.syntax import ast as A
from gpml.syntax import parse, render, tokenize


def kinds(text):
    return [(t.kind, t.value) for t in tokenize(text)][:-1]


# -- lexer ------------------------------------------------------------------


def test_full_edge_tokens():
    assert kinds("-[e:Transfer]->") == [
        ("SYMBOL", "-["), ("IDENT", "e"), ("SYMBOL", ":"), ("IDENT", "Transfer"),
        ("SYMBOL", "]->")]


def test_abbreviated_edge_with_quantifier():
    assert kinds("->{1,5}") == [("SYMBOL", "->"), ("SYMBOL", "{"), ("INT", 1),
                                ("SYMBOL", ","), ("INT", 5), ("SYMBOL", "}")]


def test_keywords_case_insensitive_identifiers_not():
    toks = kinds("match (X where x.a = 'it''s')")
    assert toks[0] == ("KEYWORD", "MATCH")
    assert ("IDENT", "X") in toks and ("IDENT", "x") in toks
    assert ("KEYWORD", "WHERE") in toks
    assert ("STRING", "it's") in toks


def test_numbers():
    assert kinds("12 1.50") == [("INT", 12), ("DECIMAL", Decimal("1.50"))]


@pytest.mark.parametrize("text,offset", [("'unclosed", 0), ("(x) # y", 4)])
def test_lex_errors(text, offset):
    with pytest.raises(LexError) as exc:
        tokenize(text)
    assert exc.value.position == offset


def test_token_spans_tile_input():
    text = queries.RUNNING
    toks = tokenize(text)
    pos = 0
    for t in toks[:-1]:
        assert text[pos:t.start].strip() == ""
        pos = t.end
    assert text[pos:].strip() == ""


# -- parser -----------------------------------------------------------------


def test_minimal_query():
    q = parse("MATCH (x)")
    assert q == A.Query((A.PathPattern(A.NodePattern("x")),))


def test_running_query_shape():
    pp = parse(queries.RUNNING).patterns[0]
    assert pp.restrictor == A.Restrictor.TRAIL and pp.selector is None
    body = pp.body
    assert isinstance(body, A.Concat) and len(body.items) == 4
    a, transfers, a2, located = body.items
    assert a.var == "a" and a.where is not None and a2 == A.NodePattern("a")
    assert transfers.quantifier == A.Quantifier(1, None)
    assert transfers.inner.label == A.LabelName("Transfer")
    assert isinstance(located, A.Paren) and isinstance(located.inner, A.Union_)
    assert [i.items[1].label for i in located.inner.items] == [A.LabelName("City"),
                                                               A.LabelName("Country")]


def test_question_mark_distinct_from_zero_one():
    q = parse("MATCH (x) [->(y)]?").patterns[0].body.items[1]
    assert q.quantifier == A.QuestionMark()
    r = parse("MATCH (x) [->(y)]{0,1}").patterns[0].body.items[1]
    assert r.quantifier == A.Quantifier(0, 1)


def test_quantifier_sugar():
    star = parse("MATCH ->*").patterns[0].body.quantifier
    plus = parse("MATCH ->+").patterns[0].body.quantifier
    assert star == parse("MATCH ->{0,}").patterns[0].body.quantifier == A.Quantifier(0, None)
    assert plus == parse("MATCH ->{1,}").patterns[0].body.quantifier == A.Quantifier(1, None)


@pytest.mark.parametrize("text,orientation", [
    ("<-[e]-", "left"), ("~[e]~", "undirected"), ("-[e]->", "right"),
    ("<~[e]~", "left-or-undirected"), ("~[e]~>", "undirected-or-right"),
    ("<-[e]->", "left-or-right"), ("-[e]-", "any"),
    ("<-", "left"), ("~", "undirected"), ("->", "right"), ("<~", "left-or-undirected"),
    ("~>", "undirected-or-right"), ("<->", "left-or-right"), ("-", "any"),
])
def test_edge_orientations(text, orientation):
    e = parse(f"MATCH (a){text}(b)").patterns[0].body.items[1]
    assert e.orientation.value == orientation


def test_label_precedence():
    lab = parse("MATCH (x:!A&B|C)").patterns[0].body.label
    assert lab == A.LabelOr((A.LabelAnd((A.LabelNot(A.LabelName("A")), A.LabelName("B"))),
                             A.LabelName("C")))
    assert parse("MATCH (x:!%)").patterns[0].body.label == A.LabelNot(A.LabelWildcard())


def test_selectors_and_restrictors():
    for text, sel in [("ANY SHORTEST", A.Selector("ANY SHORTEST")),
                      ("ALL SHORTEST", A.Selector("ALL SHORTEST")),
                      ("ANY", A.Selector("ANY")), ("ANY 3", A.Selector("ANY k", 3)),
                      ("SHORTEST 2", A.Selector("SHORTEST k", 2)),
                      ("SHORTEST 2 GROUP", A.Selector("SHORTEST k GROUP", 2))]:
        pp = parse(f"MATCH {text} ACYCLIC p = (x)->+(y)").patterns[0]
        assert pp.selector == sel and pp.restrictor == A.Restrictor.ACYCLIC and pp.var == "p"


def test_paren_forms_equivalent():
    assert parse("MATCH ((x)->(y))") == parse("MATCH [(x)->(y)]")
    inner = parse("MATCH [TRAIL (x)->(y) WHERE x.a = 1]").patterns[0].body
    assert inner.restrictor == A.Restrictor.TRAIL and inner.where is not None


def test_expressions():
    w = parse("MATCH (x)-[e]->(y) WHERE NOT x.a + 2 * 3 >= 7 AND e IS DIRECTED "
              "OR x IS SOURCE OF e OR SAME(x, y) OR x.b IS NOT NULL").where
    assert isinstance(w, A.Or) and len(w.operands) == 4
    first = w.operands[0]
    assert isinstance(first, A.And)
    assert isinstance(first.operands[0], A.Not)
    cmp = first.operands[0].operand
    assert cmp.op == ">=" and cmp.left.op == "+" and cmp.left.right.op == "*"
    agg = parse("MATCH [()-[e]->()]{1,2} WHERE COUNT(e.*) > SUM(e.w) / 2").where
    assert agg.left == A.Aggregate("COUNT", A.Var("e"), star=True)
    assert parse("MATCH (x WHERE x.a = TRUE)").patterns[0].body.where.right == A.Literal(True)


def test_literal_true_not_one():
    assert A.Literal(True) != A.Literal(1)


def test_multiple_patterns():
    q = parse("MATCH (x)->(y), (y)->(z) WHERE x.a = z.a")
    assert len(q.patterns) == 2 and q.where is not None


@pytest.mark.parametrize("text,offset", [
    ("MATCH (x) | (y) |+| (z)", 16),
    ("MATCH", 5),
    ("MATCH (x) WHERE", 15),
    ("MATCH (x)-[e]->{2,1}(y)", 19),
    ("MATCH ANY 0 (x)", 10),
    ("MATCH (where)", 12),
    ("(x)", 0),
])
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.position == offset
    d = exc.value.diagnostics[0]
    assert d.line == 1 and d.column == offset + 1


def test_error_position_multiline():
    with pytest.raises(ParseError) as exc:
        parse("MATCH (x)\n  -[e->(y)")
    d = exc.value.diagnostics[0]
    assert (d.line, str(d).split(":")[2].strip()) == (2, "ParseError")


@pytest.mark.parametrize("text", queries.CORPUS)
def test_reference_corpus_parses(text):
    assert parse(render(parse(text))) == parse(text)


# -- render -----------------------------------------------------------------


@pytest.mark.parametrize("text", ["MATCH (x:Account|IP)", "MATCH -[e]->",
                                  "MATCH (x) -[e]-> (y)", "MATCH (x) [-> (y)]?"])
def test_render_fixed_points(text):
    assert render(parse(text)) == text


def test_render_normalizes_whitespace():
    assert render(parse("MATCH   (x)\n -[e]->(  y )")) == "MATCH (x) -[e]-> (y)"


def test_render_parenthesizes_by_precedence():
    assert render(parse("MATCH (x) WHERE (x.a + 1) * 2 = 4")) == \
        "MATCH (x) WHERE (x.a + 1) * 2 = 4"
    assert render(parse("MATCH (x) WHERE x.a - (1 - 2) = 0")) == \
        "MATCH (x) WHERE x.a - (1 - 2) = 0"
    assert render(parse("MATCH (x:(A|B)&C)")) == "MATCH (x:(A|B)&C)"


def test_round_trip_generated_trees():
    rng = random.Random(2024)
    for _ in range(2000):
        tree = random_tree(rng)
        assert parse(render(tree)) == tree
