"""Four-phase evaluation: normalize, expand, match, reduce; then select and join."""

from .engine import ResultTable, eval_graph_pattern, eval_path_pattern, join_and_filter
from .expand import RigidPattern, expand, expansion_bound
from .expr import ElementRef, Group, eval_aggregate, eval_bool_expr, eval_value
from .match import PathBinding, match_pattern, match_rigid
from .normalize import NormalizedPattern, normalize, render_normalized
from .reduce import ReducedBinding, apply_selector, reduce_dedup

__all__ = [
    "ResultTable", "eval_graph_pattern", "eval_path_pattern", "join_and_filter",
    "RigidPattern", "expand", "expansion_bound", "ElementRef", "Group",
    "eval_aggregate", "eval_bool_expr", "eval_value", "PathBinding", "match_pattern",
    "match_rigid", "NormalizedPattern", "normalize", "render_normalized",
    "ReducedBinding", "apply_selector", "reduce_dedup",
]
