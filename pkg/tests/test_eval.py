import random

import pytest

import queries as Q
from fuzzgen import QueryGen, random_graph
from gpml.analyzer import analyze
from gpml.errors import AnalysisError
from gpml.eval import (apply_selector, eval_graph_pattern, expand, expansion_bound, match_pattern,
                       match_rigid, normalize, reduce_dedup, render_normalized)
from gpml.eval.engine import pattern_depths
from gpml.eval.search import match_selective, prunable
from gpml.graph import is_trail
from gpml.syntax import ast as A
from gpml.syntax import parse, render


def paths(table, i=0):
    return [str(ps[i]) for ps in table.paths]


def pattern(text):
    return parse(text).patterns[0]


# -- normalization ----------------------------------------------------------


def test_normalize_running_query():
    assert render_normalized(normalize(pattern(Q.RUNNING))) == (
        "(a WHERE a.owner = 'Jay') [(_n1) -[b:Transfer WHERE b.amount > 5000000]-> (_n2)]{1,} "
        "(a) [[(_n3) -[_e1:isLocatedIn]-> (c:City)] | [(_n4) -[_e2:isLocatedIn]-> (c:Country)]]")


def test_normalize_inserts_anonymous_ends():
    assert render_normalized(normalize(pattern("MATCH ->"))) == "(_n1) -[_e1]-> (_n2)"
    assert render_normalized(normalize(pattern("MATCH (a)-[e]->(b)"))) == "(a) -[e]-> (b)"


def test_normalize_desugars_quantifiers():
    np = normalize(pattern("MATCH (x)-[e]->*(y)"))
    (g,) = np.groups()
    assert (g.min, g.max, g.counted) == (0, None, True)


# -- expansion --------------------------------------------------------------


@pytest.mark.parametrize("text,bound", [
    ("MATCH TRAIL (x)-[e]->*(y)", 22),
    ("MATCH ACYCLIC (x)-[e]->*(y)", 14),
    ("MATCH SIMPLE (x)-[e]->+(y)", 14),
    ("MATCH (x)-[e]->{2,5}(y)", 5),
    ("MATCH ANY SHORTEST (x)-[e]->*(y)", 14),
    ("MATCH SHORTEST 2 (x)-[e]->{1,}(y)", 1 + 2 * 14),
    ("MATCH [TRAIL (x)-[e]->*(y)]", 22),
])
def test_expansion_bounds(text, bound, graph):
    np = normalize(pattern(text))
    bounds = expansion_bound(np, graph)
    assert [bounds[g.id] for g in np.groups() if g.counted] == [bound]


def test_expand_running_query(graph):
    np = normalize(pattern(Q.RUNNING))
    rigid = list(expand(np, expansion_bound(np, graph), graph))
    assert [r.length for r in rigid] == sorted(r.length for r in rigid)
    assert rigid[0].render() == "(a) -[b^1:Transfer]-> (a) -[_e1:isLocatedIn]-> (c:City)"
    four_city = [r for r in rigid if r.length == 5 and "City" in r.render()][0]
    assert four_city.render() == (
        "(a) -[b^1:Transfer]-> (_n2^1) -[b^2:Transfer]-> (_n2^2) -[b^3:Transfer]-> "
        "(_n2^3) -[b^4:Transfer]-> (a) -[_e1:isLocatedIn]-> (c:City)")


def test_expand_zero_iterations_first(graph):
    np = normalize(pattern("MATCH (x) [(y)-[e]->(z)]{0,2} (w)"))
    first = next(iter(expand(np, expansion_bound(np, graph), graph)))
    assert first.length == 0 and first.render() == "(x) (w)"


def test_match_rigid_running_query(graph):
    aq = analyze(Q.RUNNING)
    np = normalize(aq.ast.patterns[0])
    depth = pattern_depths(aq, 0)
    found = {}
    for r in expand(np, expansion_bound(np, graph), graph):
        for b in match_rigid(r, graph, depth):
            found.setdefault(r.length - 1, []).append(str(b.path))
    assert found == {
        4: ["<a4,t4,a6,t5,a3,t2,a2,t3,a4,li4,c2>"] * 2,
        7: ["<a4,t4,a6,t5,a3,t7,a5,t8,a1,t1,a3,t2,a2,t3,a4,li4,c2>"] * 2,
    }


def test_expand_and_match_rigid_equals_direct_walk():
    rng = random.Random(11)
    gen = QueryGen(rng)
    checked = 0
    while checked < 150:
        g = random_graph(rng, 4, 5)
        try:
            aq = analyze(render(gen.query()))
        except AnalysisError:
            continue
        for i, pp in enumerate(aq.ast.patterns):
            np = normalize(pp)
            depth = pattern_depths(aq, i)
            bounds = expansion_bound(np, g)
            direct = sorted(repr(b.reduced_key()) for b in match_pattern(np, g, bounds, depth))
            via = sorted(repr(b.reduced_key()) for r in expand(np, bounds, g)
                         for b in match_rigid(r, g, depth))
            assert direct == via, render(aq.ast)
        checked += 1


# -- reduction and selection ------------------------------------------------


def test_union_dedups_alternation_keeps(graph):
    assert len(eval_graph_pattern(Q.RUNNING, graph)) == 2
    assert len(eval_graph_pattern(Q.RUNNING_ALTERNATION, graph)) == 4
    union = eval_graph_pattern("MATCH (c:City) | (c:Country)", graph)
    assert [r[0] for r in union.rows] == ["c1", "c2"]
    alt = eval_graph_pattern("MATCH (c:City) |+| (c:Country)", graph)
    assert [r[0] for r in alt.rows] == ["c1", "c2", "c2"]


def test_reduce_dedup_keeps_one_per_key(graph):
    aq = analyze(Q.RUNNING)
    np = normalize(aq.ast.patterns[0])
    depth = pattern_depths(aq, 0)
    bindings = list(match_pattern(np, graph, expansion_bound(np, graph), depth))
    assert len(bindings) == 4
    reduced = reduce_dedup(bindings, depth, None)
    assert len(reduced) == 2
    assert [r.values["b"] for r in reduced] == [["t4", "t5", "t2", "t3"],
                                                ["t4", "t5", "t7", "t8", "t1", "t2", "t3"]]


def test_selectors(graph):
    assert paths(eval_graph_pattern(Q.DAVE_ARETHA_ANY_SHORTEST, graph)) == ["<a6,t5,a3,t2,a2>"]
    assert paths(eval_graph_pattern(Q.DAVE_ARETHA_MIKE, graph)) == [
        "<a6,t5,a3,t2,a2,t3,a4,t4,a6,t6,a5,t8,a1,t1,a3>",
        "<a6,t6,a5,t8,a1,t1,a3,t2,a2,t3,a4,t4,a6,t5,a3>",
    ]
    rows = eval_graph_pattern(Q.RUNNING_ALL_SHORTEST, graph)
    assert len(rows) == 1 and rows.rows[0][1] == ["t4", "t5", "t2", "t3"]


def test_selector_kinds_on_partition(graph):
    base = "MATCH {} p = (a WHERE a.owner='Dave')-[t:Transfer]->*(b WHERE b.owner='Aretha')"
    for sel, expected in [("ANY", [2]), ("ANY 2", [2, 4]), ("SHORTEST 2", [2, 4]),
                          ("SHORTEST 3 GROUP", [2, 4, 5]), ("ALL SHORTEST", [2])]:
        t = eval_graph_pattern(base.format(sel), graph)
        assert sorted(len(ps[0]) for ps in t.paths) == expected, sel


def _selected(matcher, aq, i, g):
    np = normalize(aq.ast.patterns[i])
    depth = pattern_depths(aq, i)
    bindings = matcher(np, g, expansion_bound(np, g), depth)
    chosen = apply_selector(np.selector, reduce_dedup(bindings, depth, None))
    return sorted(repr(r.key) for r in chosen)


@pytest.mark.parametrize("sel", ["ANY", "ANY SHORTEST", "ANY 2", "SHORTEST 2",
                                 "SHORTEST 2 GROUP", "ALL SHORTEST"])
def test_layered_search_selects_like_full_matching(sel, graph):
    text = f"MATCH {sel} (a WHERE a.owner='Dave')-[t:Transfer]->{{1,}}(b)"
    aq = analyze(text)
    assert prunable(normalize(aq.ast.patterns[0]))
    assert _selected(match_selective, aq, 0, graph) == _selected(match_pattern, aq, 0, graph)


def test_layered_search_on_random_queries():
    rng = random.Random(5)
    gen = QueryGen(rng)
    checked = 0
    while checked < 200:
        g = random_graph(rng, 4, 6)
        try:
            aq = analyze(render(gen.query()))
        except AnalysisError:
            continue
        for i, pp in enumerate(aq.ast.patterns):
            if prunable(normalize(pp)):
                assert (_selected(match_selective, aq, i, g)
                        == _selected(match_pattern, aq, i, g)), render(aq.ast)
                checked += 1


def test_aggregate_inside_pattern_disables_pruning():
    np = normalize(pattern("MATCH ANY (x) [(y)-[e]->(z) WHERE SUM(e.w) > 1]{1,3} (w)"))
    assert not prunable(np)
    assert not prunable(normalize(pattern("MATCH (x)-[e]->*(y)")))


def test_apply_selector_none_is_identity(graph):
    aq = analyze("MATCH (x)-[e]->(y)")
    np = normalize(aq.ast.patterns[0])
    depth = pattern_depths(aq, 0)
    reduced = reduce_dedup(match_pattern(np, graph, expansion_bound(np, graph), depth), depth, None)
    assert apply_selector(None, reduced) == reduced


# -- end to end -------------------------------------------------------------


def test_running_query_golden(graph):
    t = eval_graph_pattern(Q.RUNNING, graph)
    assert t.columns == ["a", "b", "c"]
    assert paths(t) == ["<a4,t4,a6,t5,a3,t2,a2,t3,a4,li4,c2>",
                        "<a4,t4,a6,t5,a3,t7,a5,t8,a1,t1,a3,t2,a2,t3,a4,li4,c2>"]


def test_label_disjunction_rewrite(graph):
    a = eval_graph_pattern(Q.RUNNING, graph)
    b = eval_graph_pattern(Q.RUNNING_LABEL_REWRITE, graph)
    assert a.rows == b.rows and paths(a) == paths(b)


def test_trail_paths(graph):
    t = eval_graph_pattern(Q.DAVE_ARETHA_TRAIL, graph)
    assert sorted(paths(t)) == sorted([
        "<a6,t5,a3,t2,a2>",
        "<a6,t5,a3,t7,a5,t8,a1,t1,a3,t2,a2>",
        "<a6,t6,a5,t8,a1,t1,a3,t2,a2>",
    ])
    assert all(is_trail(ps[0]) for ps in t.paths)


def test_phone_and_two_hop_bindings(graph):
    t = eval_graph_pattern(Q.PHONE_TRANSFER, graph)
    assert t.columns == ["p", "s", "t", "d"]
    assert t.rows == [("p1", "a5", "t8", "a1"), ("p2", "a3", "t2", "a2")]
    two = eval_graph_pattern(Q.TWO_HOPS, graph)
    assert ("a1", "t1", "a3", "t2", "a2") in two.rows


def test_undirected_edge_returned_twice(graph):
    t = eval_graph_pattern("MATCH ~[e]~", graph)
    assert len(t) == 12 and sorted(set(r[0] for r in t.rows)) == \
        ["hp1", "hp2", "hp3", "hp4", "hp5", "hp6"]


def test_unblocked_accounts(graph):
    t = eval_graph_pattern("MATCH (x:Account WHERE x.isBlocked='no')", graph)
    assert [r[0] for r in t.rows] == ["a1", "a2", "a3", "a5", "a6"]


def test_optional_part_and_null(graph):
    t = eval_graph_pattern("MATCH (x:Account)-[:Transfer]->(y:Account) [-(:hasPhone)-(p)]? "
                           "WHERE y.isBlocked='yes' OR p.isBlocked='yes'", graph)
    assert t.rows == [("a2", "a4", None)] or all(r[2] is not None or r[1] == "a4"
                                                 for r in t.rows)
    rows = eval_graph_pattern("MATCH (x:IP) [-(y)]?", graph).rows
    assert ("ip1", None) in rows and ("ip1", "a1") in rows


def test_group_sum_postfilter(graph):
    t = eval_graph_pattern("MATCH (a:Account) [()-[t:Transfer]->() WHERE t.amount>1000000]{2,5} "
                           "(b:Account) WHERE SUM(t.amount)>40000000", graph)
    assert len(t) > 0
    amounts = {f"t{i}": a for i, a in enumerate(
        [8, 10, 10, 10, 7, 2, 6, 6], start=1)}
    for row in t.rows:
        assert sum(amounts[e] for e in row[1]) > 40


def test_paren_where_sees_both_ends(graph):
    t = eval_graph_pattern(
        "MATCH [(a:Account)-[:Transfer]->(b:Account) WHERE a.owner=b.owner]{2,5}", graph)
    assert len(t) == 0


def test_transfer_triangle(graph):
    t = eval_graph_pattern("MATCH (s)-[:Transfer]->(s1)-[:Transfer]->(s2)-[:Transfer]->(s)", graph)
    assert t.rows == [("a1", "a3", "a5"), ("a3", "a5", "a1"), ("a5", "a1", "a3")]


def test_multiple_patterns_join(graph):
    t = eval_graph_pattern("MATCH (p:Phone WHERE p.isBlocked='yes')~[:hasPhone]~(s:Account), "
                           "(s)-[t:Transfer WHERE t.amount>1000000]->()", graph)
    assert sorted((r[1], r[2]) for r in t.rows) == [("a1", "t1"), ("a5", "t8")]


def test_natalia_restrictor_contrast(graph):
    assert len(eval_graph_pattern(Q.NATALIA_MIKE_SCOTT, graph)) >= 1
    assert len(eval_graph_pattern(Q.NATALIA_MIKE_SCOTT.replace("MATCH", "MATCH ALL SHORTEST"),
                                  graph)) >= 1
    assert len(eval_graph_pattern(Q.NATALIA_MIKE_SCOTT.replace("MATCH", "MATCH TRAIL"),
                                  graph)) == 0


def test_prefilter_postfilter_contrast(graph):
    pre = eval_graph_pattern(Q.SCOTT_PREFILTER, graph)
    assert len(pre) == 1 and pre.records()[0]["q"] == "a4"
    # the fixture's a6->a5 transfer (t6) makes this the shortest such path
    assert paths(pre) == ["<a1,t1,a3,t2,a2,t3,a4,t4,a6,t6,a5>"]
    assert len(eval_graph_pattern(Q.SCOTT_POSTFILTER, graph)) == 0
    assert len(eval_graph_pattern(Q.SCOTT_POSTFILTER_VERBATIM, graph)) == 0


def test_quotient_variants_return_nothing(graph):
    assert len(eval_graph_pattern(Q.QUOTIENT_POSTFILTER, graph)) == 0
    assert len(eval_graph_pattern(Q.QUOTIENT_TRAIL_PREFILTER, graph)) == 0


def test_rejects_unanalyzable_input(graph):
    with pytest.raises(AnalysisError):
        eval_graph_pattern("MATCH (x)-[e]->*(y)", graph)


def test_unconditional_columns_non_null_and_paths_valid(graph):
    for text in Q.CORPUS:
        try:
            aq = analyze(text)
        except AnalysisError:
            continue
        t = eval_graph_pattern(aq, graph)
        uncond = [i for i, c in enumerate(t.columns)
                  if c in aq.variables.vars and aq.variables.vars[c].category == "unconditional"]
        for row, ps in zip(t.rows, t.paths):
            assert all(row[i] is not None for i in uncond)
            assert all(p.is_valid_in(graph) for p in ps)


def test_deterministic(graph):
    a = eval_graph_pattern(Q.NATALIA_MIKE_SCOTT, graph)
    b = eval_graph_pattern(Q.NATALIA_MIKE_SCOTT, graph)
    assert a == b


def test_empty_graph():
    from gpml.graph import PropertyGraph
    assert len(eval_graph_pattern(Q.RUNNING, PropertyGraph())) == 0
