"""Evaluation of analyzed queries into result tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from ..analyzer import AnalyzedQuery, analyze
from ..graph import Path, PropertyGraph
from ..syntax import ast as A
from .expand import expansion_bound
from .expr import DictScope, ElementRef, Group, passes
from .match import match_pattern
from .normalize import normalize
from .search import match_selective, prunable
from .reduce import ReducedBinding, apply_selector, reduce_dedup


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    paths: list[tuple[Path, ...]] = field(default_factory=list)  # one per path pattern
    keys: list[tuple] = field(default_factory=list)  # reduced keys per row

    def __len__(self) -> int:
        return len(self.rows)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]


def pattern_depths(aq: AnalyzedQuery, index: int) -> dict[str, int]:
    """Quantifier depth of each element variable declared in pattern ``index``."""
    return {name: len(info.chain) for name, info in aq.variables.vars.items()
            if info.kind != "path" and index in info.patterns}


def eval_path_pattern(aq: AnalyzedQuery, index: int,
                      graph: PropertyGraph) -> list[ReducedBinding]:
    pp = aq.ast.patterns[index]
    np = normalize(pp)
    depth = pattern_depths(aq, index)
    bounds = expansion_bound(np, graph)
    matcher = match_selective if prunable(np) else match_pattern
    reduced = reduce_dedup(matcher(np, graph, bounds, depth), depth, pp.var)
    return apply_selector(pp.selector, reduced)


def _scope_value(v):
    if isinstance(v, list):
        return Group(v)
    if isinstance(v, str):
        return ElementRef(v)
    return v


def join_and_filter(aq: AnalyzedQuery, per_pattern: Sequence[Sequence[ReducedBinding]],
                    graph: PropertyGraph) -> ResultTable:
    """Cross product of the patterns' bindings, joined on shared singletons and
    filtered by the final WHERE."""
    columns = aq.columns
    table = ResultTable(columns)
    found = []
    for combo in itertools.product(*per_pattern):
        merged: dict[str, object] = {}
        ok = True
        for r in combo:
            for name, v in r.values.items():
                if name in merged and not isinstance(v, (list, Path)) and merged[name] != v:
                    ok = False
                    break
                merged[name] = v
            if not ok:
                break
        if not ok:
            continue
        scope = DictScope({k: _scope_value(v) for k, v in merged.items()})
        if not passes(aq.ast.where, scope, graph):
            continue
        row = tuple(merged.get(c) for c in columns)
        found.append((tuple(r.path.elements() for r in combo), _row_sort(row),
                      row, tuple(r.path for r in combo), tuple(r.key for r in combo)))
    found.sort(key=lambda f: (f[0], f[1], repr(f[4])))
    for _, _, row, paths, keys in found:
        table.rows.append(row)
        table.paths.append(paths)
        table.keys.append(keys)
    return table


def _row_sort(row: tuple) -> tuple:
    out = []
    for v in row:
        if v is None:
            out.append((0, ()))
        elif isinstance(v, Path):
            out.append((1, v.elements()))
        elif isinstance(v, list):
            out.append((2, tuple(v)))
        else:
            out.append((3, (v,)))
    return tuple(out)


def eval_graph_pattern(query: Union[str, A.Query, AnalyzedQuery],
                       graph: PropertyGraph) -> ResultTable:
    """Evaluate a query (text, AST or analyzed) on ``graph``."""
    aq = query if isinstance(query, AnalyzedQuery) else analyze(query)
    per_pattern = [eval_path_pattern(aq, i, graph) for i in range(len(aq.ast.patterns))]
    return join_and_filter(aq, per_pattern, graph)
