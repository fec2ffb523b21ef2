"""Static checks run before evaluation.

Every element variable gets a *chain*: the quantifiers enclosing its
declaration, outermost first. A reference made from a context with chain C
to a variable declared with chain D is

* a singleton reference when D is a prefix of C (same or outer iteration),
* a group reference when C is a proper prefix of D (crossing quantifiers),
* illegal otherwise.

Within its own scope (the body of the innermost quantifier of its chain, or
the path pattern) a variable is unconditional when every match binds it, and
conditional when it sits under ``?`` or in only some branches of a union or
alternation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import AnalysisError, Diagnostic
from .syntax import ast as A
from .syntax.parser import parse

UNCONDITIONAL = "unconditional"
CONDITIONAL = "conditional"
GROUP = "group"


@dataclass
class Declaration:
    name: str
    kind: str  # node | edge | path
    pattern: int
    chain: tuple[int, ...]
    pos: int
    ancestors: tuple[int, ...] = ()  # ids of enclosing terms, outermost first


@dataclass
class VarInfo:
    name: str
    kind: str
    category: str
    declarations: list[Declaration] = field(default_factory=list)

    @property
    def patterns(self) -> list[int]:
        return sorted({d.pattern for d in self.declarations})

    @property
    def chain(self) -> tuple[int, ...]:
        return self.declarations[0].chain

    @property
    def first_pos(self) -> int:
        return min(d.pos for d in self.declarations)


@dataclass
class Reference:
    name: str
    pos: int
    pattern: Optional[int]  # None for the final WHERE
    chain: tuple[int, ...]
    category: str  # singleton | group | illegal
    in_aggregate: bool


@dataclass
class VariableTable:
    vars: dict[str, VarInfo] = field(default_factory=dict)
    references: list[Reference] = field(default_factory=list)

    def __getitem__(self, name: str) -> VarInfo:
        return self.vars[name]

    def __contains__(self, name: str) -> bool:
        return name in self.vars

    def category(self, name: str) -> str:
        return self.vars[name].category

    def columns(self) -> list[str]:
        """Output columns: element variables by first occurrence, then path variables."""
        elems = [v for v in self.vars.values() if v.kind != "path"]
        paths = [v for v in self.vars.values() if v.kind == "path"]
        return [v.name for v in sorted(elems, key=lambda v: v.first_pos)] + \
               [v.name for v in sorted(paths, key=lambda v: v.first_pos)]


@dataclass
class AnalyzedQuery:
    ast: A.Query
    variables: VariableTable
    text: Optional[str] = None

    @property
    def columns(self) -> list[str]:
        return self.variables.columns()


# -- traversal --------------------------------------------------------------


@dataclass
class _Where:
    """A WHERE clause inside a pattern with the context it is evaluated in."""

    expr: A.Expr
    pattern: int
    chain: tuple[int, ...]
    restricted: bool  # some restrictor encloses the predicate


def _quantified(t: A.Term) -> bool:
    q = getattr(t, "quantifier", None)
    return isinstance(q, A.Quantifier)


def _walk(pp: A.PathPattern, index: int):
    """Yield ("decl", Declaration) and ("where", _Where) events for one pattern."""
    head_restricted = pp.restrictor is not None

    def visit(t, chain, ancestors, restricted):
        own = ancestors + (id(t),)
        if isinstance(t, A.Paren):
            inner_chain = chain + (id(t),) if _quantified(t) else chain
            inner_restricted = restricted or t.restrictor is not None
            yield from visit(t.inner, inner_chain, own, inner_restricted)
            if t.where is not None:
                yield "where", _Where(t.where, index, inner_chain, inner_restricted)
            return
        if isinstance(t, (A.NodePattern, A.EdgePattern)):
            is_edge = isinstance(t, A.EdgePattern)
            el_chain = chain + (id(t),) if is_edge and _quantified(t) else chain
            if t.var is not None:
                kind = "edge" if is_edge else "node"
                yield "decl", Declaration(t.var, kind, index, el_chain, t.pos, own)
            if t.where is not None:
                yield "where", _Where(t.where, index, el_chain, restricted)
            return
        for c in A.term_children(t):
            yield from visit(c, chain, own, restricted)

    if pp.var is not None:
        yield "decl", Declaration(pp.var, "path", index, (), pp.pos)
    yield from visit(pp.body, (), (), head_restricted)


def _home(pp: A.PathPattern, chain: tuple[int, ...]) -> A.Term:
    """Body of the innermost quantifier in ``chain`` (or the whole pattern)."""
    if not chain:
        return pp.body
    for t in A.walk_terms(pp.body):
        if id(t) == chain[-1]:
            return t.inner if isinstance(t, A.Paren) else t
    raise KeyError(chain[-1])


def _status(t: A.Term, name: str, home: A.Term) -> Optional[str]:
    """Binding status of ``name`` within ``t``: unconditional, conditional or None."""
    if isinstance(t, (A.NodePattern, A.EdgePattern)):
        if t is not home and _quantified(t):
            return None
        return UNCONDITIONAL if t.var == name else None
    if isinstance(t, A.Concat):
        found = [_status(i, name, home) for i in t.items]
        if UNCONDITIONAL in found:
            return UNCONDITIONAL
        return CONDITIONAL if CONDITIONAL in found else None
    if isinstance(t, (A.Union_, A.Alternation)):
        found = [_status(i, name, home) for i in t.items]
        if all(s == UNCONDITIONAL for s in found):
            return UNCONDITIONAL
        return CONDITIONAL if any(found) else None
    # Paren: quantified parens other than the home body hold no declaration here
    if t is not home and _quantified(t):
        return None
    s = _status(t.inner, name, home)
    if s is not None and isinstance(t.quantifier, A.QuestionMark):
        return CONDITIONAL
    return s


def _diag(code: str, pos: int, message: str) -> Diagnostic:
    return Diagnostic(code, max(pos, 0), message)


# -- classification ---------------------------------------------------------


def _collect(query: A.Query):
    decls: list[Declaration] = []
    wheres: list[_Where] = []
    for i, pp in enumerate(query.patterns):
        for tag, item in _walk(pp, i):
            (decls if tag == "decl" else wheres).append(item)
    return decls, wheres


def classify_variables(query: A.Query) -> tuple[VariableTable, list[Diagnostic]]:
    """Build the variable table; reports KindConflict, GroupJoin,
    ConditionalJoin and DuplicatePathVariable."""
    decls, wheres = _collect(query)
    vt = VariableTable()
    diags: list[Diagnostic] = []
    by_name: dict[str, list[Declaration]] = {}
    for d in decls:
        by_name.setdefault(d.name, []).append(d)

    for name, ds in by_name.items():
        kinds = {d.kind for d in ds}
        if len(kinds) > 1:
            later = sorted(ds, key=lambda d: d.pos)
            first_kind = later[0].kind
            for d in later:
                if d.kind != first_kind:
                    diags.append(_diag("KindConflict", d.pos,
                                       f"'{name}' used as {first_kind} and as {d.kind}"))
        kind = sorted(ds, key=lambda d: d.pos)[0].kind
        if kind == "path":
            paths = [d for d in ds if d.kind == "path"]
            for d in paths[1:]:
                diags.append(_diag("DuplicatePathVariable", d.pos,
                                   f"path variable '{name}' declared twice"))
            vt.vars[name] = VarInfo(name, "path", UNCONDITIONAL, ds)
            continue

        info = VarInfo(name, kind, UNCONDITIONAL, ds)
        vt.vars[name] = info
        chains = {d.chain for d in ds}
        if len(chains) > 1:
            for d in ds[1:]:
                if d.chain != ds[0].chain:
                    diags.append(_diag("GroupJoin", d.pos,
                                       f"'{name}' declared at different quantifier depths"))
            info.category = GROUP
            continue
        patterns = info.patterns
        if ds[0].chain:
            info.category = GROUP
            if len(patterns) > 1:
                for d in ds:
                    if d.pattern != patterns[0]:
                        diags.append(_diag("GroupJoin", d.pos,
                                           f"group variable '{name}' joined across path patterns"))
        statuses = []
        for p in patterns:
            pp = query.patterns[p]
            statuses.append(_status(_home(pp, ds[0].chain), name, _home(pp, ds[0].chain)))
        conditional = CONDITIONAL in statuses
        if not ds[0].chain and conditional:
            info.category = CONDITIONAL
        if conditional:
            if len(patterns) > 1:
                for d in ds:
                    if d.pattern != patterns[0]:
                        diags.append(_diag("ConditionalJoin", d.pos,
                                           f"conditional variable '{name}' joined across path patterns"))
            for p in patterns:
                local = [d for d in ds if d.pattern == p]
                if _co_occur(query.patterns[p], local):
                    diags.append(_diag("ConditionalJoin", local[-1].pos,
                                       f"implicit join on conditional variable '{name}'"))
    return vt, diags


def _co_occur(pp: A.PathPattern, ds: list[Declaration]) -> bool:
    """True when two declaration sites can be bound in the same match."""
    terms = {id(t): t for t in A.walk_terms(pp.body)}
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            a, b = ds[i].ancestors, ds[j].ancestors
            k = 0
            while k < min(len(a), len(b)) and a[k] == b[k]:
                k += 1
            lca = terms.get(a[k - 1]) if k else None
            if not isinstance(lca, (A.Union_, A.Alternation)):
                return True
    return False


# -- references -------------------------------------------------------------


def _resolve(vt: VariableTable, name: str, pattern: Optional[int],
             chain: tuple[int, ...]) -> str:
    info = vt.vars[name]
    if info.kind == "path":
        return "singleton" if pattern is None else "illegal"
    if pattern is not None and pattern not in info.patterns:
        return "illegal"
    d = info.chain
    if chain[:len(d)] == d:
        return "singleton"
    if d[:len(chain)] == chain:
        return "group"
    return "illegal"


def _check_expr(vt: VariableTable, e: A.Expr, pattern: Optional[int],
                chain: tuple[int, ...], diags: list[Diagnostic],
                refs: list[Reference]) -> None:
    """Resolve every reference in ``e`` and check aggregates and predicates."""

    def ref(v: A.Var, in_agg: bool) -> Optional[Reference]:
        if v.name not in vt.vars:
            diags.append(_diag("UndeclaredVariable", v.pos, f"'{v.name}' is not declared"))
            return None
        cat = _resolve(vt, v.name, pattern, chain)
        r = Reference(v.name, v.pos, pattern, chain, cat, in_agg)
        refs.append(r)
        if cat == "illegal":
            diags.append(_diag("IllegalReference", v.pos,
                               f"'{v.name}' is not visible here"))
        elif cat == "group" and not in_agg:
            diags.append(_diag("BareGroupReference", v.pos,
                               f"group variable '{v.name}' must appear inside an aggregate"))
        return r

    def kind_of(v: A.Var) -> Optional[str]:
        info = vt.vars.get(v.name)
        return info.kind if info else None

    def visit(x: A.Expr, agg: Optional[A.Aggregate]) -> list[Reference]:
        if isinstance(x, A.Var):
            r = ref(x, agg is not None)
            return [r] if r else []
        if isinstance(x, A.Aggregate):
            if agg is not None:
                diags.append(_diag("NestedAggregate", x.pos, "aggregates cannot be nested"))
            inner = visit(x.arg, x)
            groups = sorted({r.name for r in inner if r.category == "group"})
            if not groups:
                diags.append(_diag("AggregateWithoutGroup", x.pos,
                                   f"{x.fn} needs a group variable"))
            elif len(groups) > 1:
                diags.append(_diag("AmbiguousAggregate", x.pos,
                                   f"{x.fn} mixes group variables {', '.join(groups)}"))
            if x.star and inner and inner[0].category != "group":
                diags.append(_diag("AggregateWithoutGroup", x.pos,
                                   f"COUNT({x.arg.name}.*) needs a group variable"))
            return inner
        if isinstance(x, A.ElementPredicate):
            out = []
            for v in x.args:
                r = ref(v, agg is not None)
                if r is None:
                    continue
                out.append(r)
                info = vt.vars[v.name]
                if (r.category != "singleton" or info.kind == "path"
                        or info.category == CONDITIONAL):
                    diags.append(_diag("IllegalSameArgument", v.pos,
                                       f"{x.fn} arguments must be unconditional singletons"))
            return out
        if isinstance(x, A.IsDirected) and kind_of(x.edge) not in (None, "edge"):
            diags.append(_diag("KindConflict", x.edge.pos, f"'{x.edge.name}' is not an edge"))
        if isinstance(x, A.IsEndpoint):
            if kind_of(x.node) not in (None, "node"):
                diags.append(_diag("KindConflict", x.node.pos, f"'{x.node.name}' is not a node"))
            if kind_of(x.edge) not in (None, "edge"):
                diags.append(_diag("KindConflict", x.edge.pos, f"'{x.edge.name}' is not an edge"))
        out = []
        for c in A.expr_children(x):
            out += visit(c, agg)
        return out

    visit(e, None)


def _quantifier_index(query: A.Query) -> dict[int, A.Term]:
    index = {}
    for pp in query.patterns:
        for t in A.walk_terms(pp.body):
            if _quantified(t):
                index[id(t)] = t
    return index


def check_legality(query: A.Query, vt: VariableTable) -> list[Diagnostic]:
    """Reference resolution, aggregate shape and SAME/ALL_DIFFERENT arguments."""
    diags: list[Diagnostic] = []
    refs: list[Reference] = []
    _, wheres = _collect(query)
    for w in wheres:
        _check_expr(vt, w.expr, w.pattern, w.chain, diags, refs)
    if query.where is not None:
        _check_expr(vt, query.where, None, (), diags, refs)
    vt.references = refs
    return diags


def check_termination(query: A.Query, vt: VariableTable) -> list[Diagnostic]:
    """Unbounded quantifiers need a restrictor or selector; group references in
    prefilters need every crossed quantifier bounded without selectors."""
    diags: list[Diagnostic] = []
    for pp in query.patterns:
        guarded = pp.restrictor is not None or pp.selector is not None

        def visit(t, guarded):
            if _quantified(t):
                q = t.quantifier
                if q.max is None:
                    if not guarded:
                        diags.append(_diag("UnboundedQuantifier", t.pos,
                                           "unbounded quantifier needs a restrictor or selector"))
                    body = t.inner if isinstance(t, A.Paren) else A.EdgePattern(t.orientation)
                    if A.min_edges(body) == 0:
                        diags.append(_diag("NullableUnboundedBody", t.pos,
                                           "unbounded quantifier over a body that can match no edge"))
            if isinstance(t, A.Paren):
                # a paren's own restrictor applies per iteration, inside its quantifier
                for c in A.term_children(t):
                    visit(c, guarded or t.restrictor is not None)
                return
            for c in A.term_children(t):
                visit(c, guarded)

        visit(pp.body, guarded)

    quantifiers = _quantifier_index(query)
    _, wheres = _collect(query)
    for w in wheres:
        if w.restricted:
            continue
        for v, _ in A.iter_vars(w.expr):
            info = vt.vars.get(v.name)
            if info is None or info.kind == "path":
                continue
            if _resolve(vt, v.name, w.pattern, w.chain) != "group":
                continue
            crossed = info.chain[len(w.chain):]
            if any(quantifiers[q].quantifier.max is None for q in crossed):
                diags.append(_diag("UnboundedGroupPredicate", v.pos,
                                   f"prefilter over unbounded group variable '{v.name}'"))
    return diags


def analyze(source: Union[str, A.Query]) -> AnalyzedQuery:
    """Parse (if needed) and check a query; raises ``QueryError`` on any problem."""
    text = source if isinstance(source, str) else None
    query = parse(source) if isinstance(source, str) else source
    vt, diags = classify_variables(query)
    diags += check_legality(query, vt)
    diags += check_termination(query, vt)
    if diags:
        raise AnalysisError(_dedup(diags), text)
    return AnalyzedQuery(query, vt, text)


def _dedup(diags: list[Diagnostic]) -> list[Diagnostic]:
    seen, out = set(), []
    for d in diags:
        key = (d.code, d.offset, d.message)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def iter_declarations(query: A.Query) -> Iterator[Declaration]:
    for i, pp in enumerate(query.patterns):
        for tag, item in _walk(pp, i):
            if tag == "decl":
                yield item
