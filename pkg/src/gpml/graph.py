"""In-memory property graphs, path values and the graph-JSON loader."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping, Optional, Union

from .errors import DuplicateId, Malformed, UnknownEndpoint, UnknownNode

Value = Union[str, int, Decimal, bool, None]


@dataclass(frozen=True)
class Directed:
    src: str
    dst: str


@dataclass(frozen=True)
class Undirected:
    """Unordered pair; ``a``/``b`` keep file order for serialization only."""

    a: str
    b: str

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Undirected):
            return NotImplemented
        return {self.a, self.b} == {other.a, other.b}

    def __hash__(self) -> int:
        return hash(frozenset((self.a, self.b)))


Endpoints = Union[Directed, Undirected]


@dataclass
class Node:
    id: str
    labels: frozenset[str] = frozenset()
    properties: dict[str, Value] = field(default_factory=dict)


@dataclass
class Edge:
    id: str
    endpoints: Endpoints
    labels: frozenset[str] = frozenset()
    properties: dict[str, Value] = field(default_factory=dict)

    @property
    def directed(self) -> bool:
        return isinstance(self.endpoints, Directed)

    def connects(self) -> tuple[str, str]:
        ep = self.endpoints
        return (ep.src, ep.dst) if isinstance(ep, Directed) else (ep.a, ep.b)


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    UNDIRECTED = "undirected"


class Mode(str, Enum):
    OUTGOING = "outgoing"
    INCOMING = "incoming"
    UNDIRECTED = "undirected"
    ANY = "any"


@dataclass(frozen=True)
class Step:
    """One traversal of an edge: from ``source`` along ``edge`` to ``target``."""

    edge: str
    source: str
    target: str
    direction: Direction


class PropertyGraph:
    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, Edge] = {}
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        self._und: dict[str, list[str]] = {}

    def __repr__(self) -> str:
        return f"PropertyGraph({len(self.nodes)} nodes, {len(self.edges)} edges)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def _check_new(self, id: str) -> None:
        if not isinstance(id, str) or not id:
            raise Malformed(f"element id must be a non-empty string, got {id!r}")
        if id in self.nodes or id in self.edges:
            raise DuplicateId(id)

    def add_node(self, id: str, labels: Iterable[str] = (),
                 properties: Optional[Mapping[str, Value]] = None) -> Node:
        self._check_new(id)
        node = Node(id, frozenset(labels), dict(properties or {}))
        self.nodes[id] = node
        self._out[id], self._in[id], self._und[id] = [], [], []
        return node

    def add_edge(self, id: str, endpoints: Endpoints, labels: Iterable[str] = (),
                 properties: Optional[Mapping[str, Value]] = None) -> Edge:
        self._check_new(id)
        u, v = (endpoints.src, endpoints.dst) if isinstance(endpoints, Directed) \
            else (endpoints.a, endpoints.b)
        for end in (u, v):
            if end not in self.nodes:
                raise UnknownEndpoint(f"edge {id}: no node {end!r}")
        edge = Edge(id, endpoints, frozenset(labels), dict(properties or {}))
        self.edges[id] = edge
        if isinstance(endpoints, Directed):
            self._out[u].append(id)
            self._in[v].append(id)
        else:
            self._und[u].append(id)
            if v != u:
                self._und[v].append(id)
        return edge

    def node(self, id: str) -> Node:
        try:
            return self.nodes[id]
        except KeyError:
            raise UnknownNode(id) from None

    def element(self, id: str) -> Union[Node, Edge]:
        return self.nodes.get(id) or self.edges[id]

    def property(self, id: str, name: str) -> Value:
        el = self.nodes.get(id) or self.edges.get(id)
        return None if el is None else el.properties.get(name)

    def incident_edges(self, node_id: str, mode: Union[Mode, str] = Mode.ANY) -> set[str]:
        self.node(node_id)
        mode = Mode(mode)
        out: set[str] = set()
        if mode in (Mode.OUTGOING, Mode.ANY):
            out.update(self._out[node_id])
        if mode in (Mode.INCOMING, Mode.ANY):
            out.update(self._in[node_id])
        if mode in (Mode.UNDIRECTED, Mode.ANY):
            out.update(self._und[node_id])
        return out

    def steps_from(self, node_id: str) -> Iterator[Step]:
        """Every way of leaving ``node_id`` along one edge.

        Directed edges yield a forward step from their source and a backward step
        from their target (so a directed self-loop yields both). An undirected
        edge yields one step from each endpoint, once for a self-loop.
        """
        for eid in self._out[node_id]:
            yield Step(eid, node_id, self.edges[eid].endpoints.dst, Direction.FORWARD)
        for eid in self._in[node_id]:
            yield Step(eid, node_id, self.edges[eid].endpoints.src, Direction.BACKWARD)
        for eid in self._und[node_id]:
            a, b = self.edges[eid].connects()
            yield Step(eid, node_id, b if a == node_id else a, Direction.UNDIRECTED)


# -- paths ------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    nodes: tuple[str, ...]
    edges: tuple[str, ...] = ()
    directions: tuple[Direction, ...] = ()

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.edges) + 1:
            raise ValueError("a path has exactly one more node than edges")
        if len(self.directions) not in (0, len(self.edges)):
            raise ValueError("one direction flag per edge")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def first(self) -> str:
        return self.nodes[0]

    @property
    def last(self) -> str:
        return self.nodes[-1]

    def elements(self) -> tuple[str, ...]:
        out = [self.nodes[0]]
        for e, n in zip(self.edges, self.nodes[1:]):
            out += [e, n]
        return tuple(out)

    @classmethod
    def from_elements(cls, seq: Iterable[str], directions: Iterable[Direction] = ()) -> "Path":
        seq = list(seq)
        return cls(tuple(seq[0::2]), tuple(seq[1::2]), tuple(directions))

    def is_valid_in(self, graph: PropertyGraph) -> bool:
        if any(n not in graph.nodes for n in self.nodes):
            return False
        for i, eid in enumerate(self.edges):
            edge = graph.edges.get(eid)
            if edge is None:
                return False
            u, v = self.nodes[i], self.nodes[i + 1]
            d = self.directions[i] if self.directions else None
            if edge.directed:
                ep = edge.endpoints
                fwd, bwd = (ep.src, ep.dst) == (u, v), (ep.dst, ep.src) == (u, v)
                ok = fwd if d == Direction.FORWARD else bwd if d == Direction.BACKWARD \
                    else (d is None and (fwd or bwd))
            else:
                ok = {u, v} == set(edge.connects()) and d in (None, Direction.UNDIRECTED)
            if not ok:
                return False
        return True

    def __str__(self) -> str:
        return "<" + ",".join(self.elements()) + ">"


def is_trail(path: Path) -> bool:
    return len(set(path.edges)) == len(path.edges)


def is_acyclic(path: Path) -> bool:
    return len(set(path.nodes)) == len(path.nodes)


def is_simple(path: Path) -> bool:
    nodes = path.nodes
    if len(nodes) > 1 and nodes[0] == nodes[-1]:
        nodes = nodes[:-1]
    return len(set(nodes)) == len(nodes)


RESTRICTOR_CHECKS = {"TRAIL": is_trail, "ACYCLIC": is_acyclic, "SIMPLE": is_simple}


# -- graph-JSON -------------------------------------------------------------

_NODE_KEYS = {"id", "labels", "properties"}
_EDGE_KEYS = {"id", "src", "dst", "undirected", "labels", "properties"}


def _value(v: Any, where: str) -> Value:
    if v is None or isinstance(v, (str, bool, int, Decimal)):
        return v
    if isinstance(v, float):
        return Decimal(repr(v))
    raise Malformed(f"{where}: unsupported property value {v!r}")


def _labels(row: Mapping, where: str) -> list[str]:
    labels = row.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise Malformed(f"{where}: labels must be a list of strings")
    return labels


def _props(row: Mapping, where: str) -> dict[str, Value]:
    props = row.get("properties", {})
    if not isinstance(props, dict):
        raise Malformed(f"{where}: properties must be an object")
    return {str(k): _value(v, where) for k, v in props.items()}


def load_graph(document: Union[str, bytes, Mapping]) -> PropertyGraph:
    """Build a graph from a graph-JSON document (text or already-decoded object).

    Edges may appear before the nodes they reference; nodes are added first.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document, parse_float=Decimal)
        except ValueError as exc:
            raise Malformed(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict) or set(document) - {"nodes", "edges"}:
        raise Malformed("top level must be an object with 'nodes' and 'edges'")
    nodes, edges = document.get("nodes", []), document.get("edges", [])
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise Malformed("'nodes' and 'edges' must be arrays")

    g = PropertyGraph()
    for i, row in enumerate(nodes):
        where = f"nodes[{i}]"
        if not isinstance(row, dict) or "id" not in row or set(row) - _NODE_KEYS:
            raise Malformed(f"{where}: expected keys {sorted(_NODE_KEYS)}")
        g.add_node(row["id"], _labels(row, where), _props(row, where))
    for i, row in enumerate(edges):
        where = f"edges[{i}]"
        if not isinstance(row, dict) or not {"id", "src", "dst"} <= set(row) \
                or set(row) - _EDGE_KEYS:
            raise Malformed(f"{where}: expected keys {sorted(_EDGE_KEYS)}")
        undirected = row.get("undirected", False)
        if not isinstance(undirected, bool):
            raise Malformed(f"{where}: 'undirected' must be a boolean")
        src, dst = row["src"], row["dst"]
        if not isinstance(src, str) or not isinstance(dst, str):
            raise Malformed(f"{where}: endpoints must be strings")
        ep = Undirected(src, dst) if undirected else Directed(src, dst)
        g.add_edge(row["id"], ep, _labels(row, where), _props(row, where))
    return g


def load_graph_file(path: str) -> PropertyGraph:
    with open(path, "rb") as fh:
        return load_graph(fh.read())


def _json_value(v: Value) -> Any:
    if isinstance(v, Decimal):
        return float(v)
    return v


def graph_to_document(graph: PropertyGraph) -> dict:
    nodes = [
        {"id": n.id, "labels": sorted(n.labels),
         "properties": {k: _json_value(v) for k, v in n.properties.items()}}
        for n in graph.nodes.values()
    ]
    edges = []
    for e in graph.edges.values():
        u, v = e.connects()
        row: dict[str, Any] = {"id": e.id, "src": u, "dst": v}
        if not e.directed:
            row["undirected"] = True
        row["labels"] = sorted(e.labels)
        row["properties"] = {k: _json_value(x) for k, x in e.properties.items()}
        edges.append(row)
    return {"nodes": nodes, "edges": edges}


def dump_graph(graph: PropertyGraph, indent: Optional[int] = 2) -> str:
    return json.dumps(graph_to_document(graph), indent=indent)
