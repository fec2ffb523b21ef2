"""Command-line front end: run one query against a graph file, or start a REPL.

Exit status is 0 on success, 1 when the query is rejected (lexing, parsing or
analysis; diagnostics go to stderr as ``line:col: Code: message``) and 2 when
the graph or query file cannot be read or the oracle hits a safety cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, TextIO

from .analyzer import analyze
from .errors import CapExceeded, GraphError, QueryError
from .eval import ResultTable, eval_graph_pattern
from .fixture import fixture_path
from .graph import Path, PropertyGraph, load_graph_file
from .oracle import OracleConfig, oracle_match

FORMATS = ("table", "csv", "jsonl")
PROMPT = "gpml> "
CONTINUE = "  ... "


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gpml",
        description="Evaluate graph pattern MATCH queries over a graph-JSON file. "
                    "Without --query or --query-file an interactive session starts.")
    p.add_argument("--graph", metavar="PATH",
                   help="graph-JSON file (default: the bundled banking fixture, "
                        "or $GPML_FIXTURE)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--query", metavar="TEXT", help="query text")
    src.add_argument("--query-file", metavar="PATH", help="file holding one query")
    p.add_argument("--format", choices=FORMATS, default="table", help="output format")
    p.add_argument("--limit", type=int, metavar="N", help="print at most N rows")
    p.add_argument("--check", action="store_true",
                   help="only parse and analyze the query")
    p.add_argument("--oracle", action="store_true",
                   help="evaluate with the brute-force reference instead of the engine")
    p.add_argument("--max-path-len", type=int, metavar="N",
                   help="oracle path length cap (default: derived from the query)")
    return p


# -- rendering --------------------------------------------------------------


def cell_text(v) -> str:
    """Table/CSV text for a result cell; nulls become the empty string."""
    if v is None:
        return ""
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, list):
        return "[" + ",".join(v) + "]"
    return str(v)


def cell_json(v):
    if isinstance(v, Path):
        return {"nodes": list(v.nodes), "edges": list(v.edges)}
    return v


def format_table(table: ResultTable, limit: Optional[int] = None) -> str:
    rows = table.rows if limit is None else table.rows[:limit]
    grid = [[cell_text(v) if v is not None else "null" for v in r] for r in rows]
    widths = [len(c) for c in table.columns]
    for r in grid:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]
    rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"

    def line(cells):
        return "|" + "|".join(f" {c:<{w}} " for c, w in zip(cells, widths)) + "|"

    out = [rule, line(table.columns), rule] if table.columns else []
    out += [line(r) for r in grid]
    if table.columns and grid:
        out.append(rule)
    n = len(rows)
    out.append(f"({n} row{'s' if n != 1 else ''})")
    return "\n".join(out) + "\n"


def format_csv(table: ResultTable, limit: Optional[int] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(table.columns)
    for r in table.rows if limit is None else table.rows[:limit]:
        w.writerow([cell_text(v) for v in r])
    return buf.getvalue()


def format_jsonl(table: ResultTable, limit: Optional[int] = None) -> str:
    lines = [json.dumps({c: cell_json(v) for c, v in zip(table.columns, r)})
             for r in (table.rows if limit is None else table.rows[:limit])]
    return "".join(line + "\n" for line in lines)


FORMATTERS = {"table": format_table, "csv": format_csv, "jsonl": format_jsonl}


# -- driver -----------------------------------------------------------------


class Session:
    """Graph, output settings and streams shared by one-shot runs and the REPL."""

    def __init__(self, graph: PropertyGraph, fmt: str = "table", limit: Optional[int] = None,
                 oracle: bool = False, max_path_len: Optional[int] = None,
                 out: TextIO = sys.stdout, err: TextIO = sys.stderr):
        self.graph = graph
        self.fmt = fmt
        self.limit = limit
        self.oracle = oracle
        self.max_path_len = max_path_len
        self.out = out
        self.err = err

    def report(self, exc: QueryError) -> None:
        for d in exc.diagnostics:
            print(d, file=self.err)

    def run(self, text: str, check: bool = False) -> int:
        try:
            aq = analyze(text)
            if check:
                print("ok: " + ", ".join(aq.columns), file=self.out)
                return 0
            if self.oracle:
                table = oracle_match(aq, self.graph,
                                     OracleConfig(max_path_length=self.max_path_len))
            else:
                table = eval_graph_pattern(aq, self.graph)
        except QueryError as exc:
            self.report(exc)
            return 1
        except CapExceeded as exc:
            print(f"error: {exc}", file=self.err)
            return 2
        self.out.write(FORMATTERS[self.fmt](table, self.limit))
        return 0


def repl(session: Session, inp: TextIO, interactive: bool = False) -> int:
    """Read blank-line-terminated query blocks until ``:quit`` or end of input."""
    block: list[str] = []

    def prompt(text: str) -> None:
        if interactive:
            session.out.write(text)
            session.out.flush()

    prompt(PROMPT)
    for raw in inp:
        line = raw.rstrip("\n")
        if line.strip().startswith(":"):
            # a metacommand also ends a pending query
            if block:
                session.run("\n".join(block))
                block = []
            if not meta(session, line.strip()):
                return 0
            prompt(PROMPT)
            continue
        if line.strip():
            block.append(line)
            prompt(CONTINUE)
            continue
        if block:
            session.run("\n".join(block))
            block = []
        prompt(PROMPT)
    if block:
        session.run("\n".join(block))
    return 0


def meta(session: Session, line: str) -> bool:
    """Handle a metacommand; False means the session should end."""
    cmd, _, arg = line.partition(" ")
    arg = arg.strip()
    if cmd in (":quit", ":q", ":exit"):
        return False
    if cmd == ":load":
        try:
            session.graph = load_graph_file(arg)
        except (OSError, GraphError) as exc:
            print(f"error: {exc}", file=session.err)
        else:
            g = session.graph
            print(f"loaded {arg}: {len(g.nodes)} nodes, {len(g.edges)} edges", file=session.out)
    elif cmd == ":format":
        if arg in FORMATS:
            session.fmt = arg
        else:
            print(f"error: format must be one of {', '.join(FORMATS)}", file=session.err)
    elif cmd == ":help":
        print(":load FILE   :format table|csv|jsonl   :quit\n"
              "end a query with a blank line", file=session.out)
    else:
        print(f"error: unknown command {cmd} (try :help)", file=session.err)
    return True


def main(argv: Optional[list[str]] = None, stdin: Optional[TextIO] = None,
         stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["oracle"]:
        argv = ["--oracle"] + argv[1:]
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    args = build_parser().parse_args(argv)

    graph_path = args.graph or fixture_path()
    try:
        graph = load_graph_file(graph_path)
        text = None
        if args.query is not None:
            text = args.query
        elif args.query_file is not None:
            with open(args.query_file, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, GraphError) as exc:
        print(f"error: {exc}", file=err)
        return 2

    session = Session(graph, args.format, args.limit, args.oracle, args.max_path_len, out, err)
    if text is None:
        if args.check:
            print("error: --check needs --query or --query-file", file=err)
            return 2
        return repl(session, stdin, interactive=stdin.isatty())
    return session.run(text, check=args.check)
