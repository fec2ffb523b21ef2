"""The banking graph used throughout the examples and tests.

Owners, blocked flags, the transfers t1..t3, the city/country nodes and the
sign-in edges come from the published tables; the remaining transfer
endpoints are forced by the example paths. Amounts on t4..t8, the ids hp1,
hp2, hp4..hp6 and the phones p3/p4 are choices made here: t4, t5, t7 and t8
exceed 5M so that the running example reproduces, t6 stays below it.
"""

from __future__ import annotations

import os
from importlib import resources

from .graph import Directed, PropertyGraph, Undirected, load_graph

ACCOUNTS = [
    ("a1", "Scott", "no"),
    ("a2", "Aretha", "no"),
    ("a3", "Mike", "no"),
    ("a4", "Jay", "yes"),
    ("a5", "Natalia", "no"),
    ("a6", "Dave", "no"),
]

TRANSFERS = [
    ("t1", "a1", "a3", "1/1/2020", 8_000_000),
    ("t2", "a3", "a2", "2/1/2020", 10_000_000),
    ("t3", "a2", "a4", "3/1/2020", 10_000_000),
    ("t4", "a4", "a6", "4/1/2020", 10_000_000),
    ("t5", "a6", "a3", "5/1/2020", 7_000_000),
    ("t6", "a6", "a5", "6/1/2020", 2_000_000),
    ("t7", "a3", "a5", "7/1/2020", 6_000_000),
    ("t8", "a5", "a1", "8/1/2020", 6_000_000),
]

LOCATED_IN = [
    ("li1", "a1", "c1"),
    ("li2", "a2", "c2"),
    ("li3", "a3", "c1"),
    ("li4", "a4", "c2"),
    ("li5", "a5", "c1"),
    ("li6", "a6", "c2"),
]

HAS_PHONE = [
    ("hp1", "a1", "p1"),
    ("hp2", "a5", "p1"),
    ("hp3", "a3", "p2"),
    ("hp4", "a2", "p2"),
    ("hp5", "a4", "p3"),
    ("hp6", "a6", "p4"),
]

SIGN_IN = [("sip1", "a1", "ip1"), ("sip2", "a5", "ip2")]


def fixture_graph() -> PropertyGraph:
    g = PropertyGraph()
    for id, owner, blocked in ACCOUNTS:
        g.add_node(id, {"Account"}, {"owner": owner, "isBlocked": blocked})
    g.add_node("c1", {"Country"}, {"name": "Zembla"})
    g.add_node("c2", {"City", "Country"}, {"name": "Ankh-Morpork"})
    g.add_node("p1", {"Phone"}, {"isBlocked": "yes"})
    for p in ("p2", "p3", "p4"):
        g.add_node(p, {"Phone"}, {"isBlocked": "no"})
    g.add_node("ip1", {"IP"})
    g.add_node("ip2", {"IP"})
    for id, src, dst, date, amount in TRANSFERS:
        g.add_edge(id, Directed(src, dst), {"Transfer"}, {"date": date, "amount": amount})
    for id, src, dst in LOCATED_IN:
        g.add_edge(id, Directed(src, dst), {"isLocatedIn"})
    for id, a, p in HAS_PHONE:
        g.add_edge(id, Undirected(a, p), {"hasPhone"})
    for id, a, ip in SIGN_IN:
        g.add_edge(id, Directed(a, ip), {"signInWithIP"})
    return g


def fixture_path() -> str:
    """Location of the packaged fixture file, overridable with ``GPML_FIXTURE``."""
    env = os.environ.get("GPML_FIXTURE")
    if env:
        return env
    return str(resources.files("gpml") / "data" / "paper-graph.json")


def load_fixture() -> PropertyGraph:
    with open(fixture_path(), "rb") as fh:
        return load_graph(fh.read())
