import random

import pytest

import queries as Q
from fuzzgen import differential_cases, table_signature
from gpml.errors import CapExceeded
from gpml.eval import eval_graph_pattern
from gpml.graph import Direction, PropertyGraph
from gpml.oracle import OracleConfig, enumerate_paths, oracle_match, structural_cap
from gpml.syntax import parse


def forward_transfers(graph):
    return lambda step: (step.direction == Direction.FORWARD
                         and "Transfer" in graph.edges[step.edge].labels)


def test_enumerate_zero_length(graph):
    walks = list(enumerate_paths(graph, 0))
    assert len(walks) == 14
    assert all(not w.edges for w in walks)


def test_enumerate_forward_transfers(graph):
    walks = [w for w in enumerate_paths(graph, 1, forward_transfers(graph)) if w.edges]
    assert len(walks) == 8
    assert sorted(w.edges[0] for w in walks) == [f"t{i}" for i in range(1, 9)]


def test_enumerate_two_steps_from_dave(graph):
    walks = {str(w) for w in enumerate_paths(graph, 2, forward_transfers(graph))
             if w.first == "a6"}
    assert "<a6,t5,a3,t2,a2>" in walks
    assert "<a6>" in walks


def test_enumerate_cap(graph):
    with pytest.raises(CapExceeded):
        list(enumerate_paths(graph, 6, max_paths=50))


def test_structural_cap(graph):
    pp = parse("MATCH (x)-[e]->{2,5}(y)").patterns[0]
    assert structural_cap(pp, graph) == 5
    pp = parse("MATCH TRAIL (x)-[e]->*(y)").patterns[0]
    assert structural_cap(pp, graph) == len(graph.edges)


@pytest.mark.parametrize("text", [
    Q.RUNNING, Q.RUNNING_ALTERNATION, Q.RUNNING_LABEL_REWRITE, Q.DAVE_ARETHA_TRAIL,
    Q.DAVE_ARETHA_ANY_SHORTEST, Q.PHONE_TRANSFER, Q.TWO_HOPS,
    "MATCH (x)-[:Transfer]->(y)-[:Transfer]->(z)-[:Transfer]->(x)",
    "MATCH (c:City) | (c:Country)",
])
def test_oracle_agrees_with_engine_on_fixture(text, graph):
    want = oracle_match(text, graph)
    assert table_signature(want) == table_signature(eval_graph_pattern(text, graph))


def test_running_query_rows(graph):
    t = oracle_match(Q.RUNNING, graph)
    assert len(t.rows) == 2
    assert [(r["a"], r["c"], len(r["b"])) for r in t.records()] == [("a4", "c2", 4),
                                                                    ("a4", "c2", 7)]


def test_empty_graph():
    t = oracle_match("MATCH (x)-[e]->(y)", PropertyGraph())
    assert t.rows == [] and t.columns == ["x", "e", "y"]


def test_row_cap(graph):
    with pytest.raises(CapExceeded):
        oracle_match("MATCH (x), (y)", graph, OracleConfig(max_rows=20))


def test_explicit_length_cap_truncates(graph):
    short = oracle_match("MATCH TRAIL (a)-[t:Transfer]->*(b)", graph,
                         OracleConfig(max_path_length=1))
    assert max(len(ps[0]) for ps in short.paths) == 1


def test_small_differential_run():
    cases = 0
    for g, text, got, want in differential_cases(seed=3, count=300):
        assert table_signature(got) == table_signature(want), text
        cases += 1
    assert cases == 300
