"""Graph pattern matching over in-memory property graphs.

Queries are parsed into a syntax tree, checked by the analyzer and evaluated
either by the engine (normalize, expand, match, reduce, select, join) or by a
brute-force reference used for differential testing.
"""

from .analyzer import AnalyzedQuery, analyze
from .errors import (AnalysisError, CapExceeded, Diagnostic, GpmlError, GraphError,
                     LexError, ParseError, QueryError)
from .eval import ResultTable, eval_graph_pattern
from .fixture import load_fixture, fixture_graph
from .graph import (Directed, Edge, Node, Path, PropertyGraph, Undirected, dump_graph,
                    load_graph, load_graph_file)
from .oracle import OracleConfig, enumerate_paths, oracle_match
from .syntax import parse, render

__all__ = [
    "AnalyzedQuery", "analyze", "AnalysisError", "CapExceeded", "Diagnostic", "GpmlError",
    "GraphError", "LexError", "ParseError", "QueryError", "ResultTable",
    "eval_graph_pattern", "load_fixture", "fixture_graph", "Directed", "Edge", "Node", "Path",
    "PropertyGraph", "Undirected", "dump_graph", "load_graph", "load_graph_file",
    "OracleConfig", "enumerate_paths", "oracle_match", "parse", "render",
]
