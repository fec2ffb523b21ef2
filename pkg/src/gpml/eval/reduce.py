"""Reduction, deduplication and selectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from ..graph import Path
from ..syntax import ast as A


@dataclass(frozen=True)
class ReducedBinding:
    """A deduplicated match of one path pattern.

    ``key`` is the annotation-free binding sequence plus the ``|+|`` branch
    tags; ``values`` maps each variable of the pattern to an element id, a
    list of ids (group), a ``Path`` or ``None``.
    """

    key: tuple
    path: Path
    values: Mapping[str, object]

    @property
    def endpoints(self) -> tuple[str, str]:
        return self.path.first, self.path.last


def reduce_binding(binding, depth: Mapping[str, int], path_var: Optional[str]) -> ReducedBinding:
    values: dict[str, object] = {}
    for name, d in depth.items():
        if d:
            values[name] = [o.element for o in binding.occurrences if o.name == name]
        else:
            values[name] = next((o.element for o in binding.occurrences if o.name == name), None)
    if path_var is not None:
        values[path_var] = binding.path
    return ReducedBinding(binding.reduced_key(), binding.path, values)


def reduce_dedup(bindings: Iterable, depth: Mapping[str, int],
                 path_var: Optional[str] = None) -> list[ReducedBinding]:
    """Strip annotations and keep one binding per distinct key (first seen)."""
    seen: dict[tuple, ReducedBinding] = {}
    for b in bindings:
        r = reduce_binding(b, depth, path_var)
        seen.setdefault(r.key, r)
    return list(seen.values())


def order_key(r: ReducedBinding) -> tuple:
    """Selector preference: shorter first, then by element ids, then the
    variable layout and branch tags so ties never depend on input order."""
    seq, tags = r.key
    layout = tuple((names if isinstance(names, tuple) else (names or "",)) for names, _ in seq)
    return len(r.path), r.path.elements(), layout, tags


def apply_selector(selector: Optional[A.Selector],
                   rows: Iterable[ReducedBinding]) -> list[ReducedBinding]:
    rows = list(rows)
    if selector is None:
        return rows
    parts: dict[tuple[str, str], list[ReducedBinding]] = {}
    for r in rows:
        parts.setdefault(r.endpoints, []).append(r)
    out: list[ReducedBinding] = []
    for ends in sorted(parts):
        cands = sorted(parts[ends], key=order_key)
        kind = selector.kind
        if kind in ("ANY SHORTEST", "ANY"):
            out += cands[:1]
        elif kind in ("ANY k", "SHORTEST k"):
            out += cands[:selector.k]
        elif kind == "ALL SHORTEST":
            shortest = len(cands[0].path)
            out += [r for r in cands if len(r.path) == shortest]
        elif kind == "SHORTEST k GROUP":
            lengths = sorted({len(r.path) for r in cands})[:selector.k]
            out += [r for r in cands if len(r.path) in lengths]
        else:
            raise ValueError(f"unknown selector {kind}")
    return out
