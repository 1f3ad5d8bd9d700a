"""Flat-file formats: edge lists, edge colorings and JSON reports.

Edge-list format: the first non-comment line is the vertex count, then one
``u v`` pair per line (0-indexed). ``#`` starts a comment. Coloring files
hold one ``u v c`` line per edge.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, TextIO

from .errors import GraphParseError
from .graph import Edge, Graph


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphParseError(f"malformed line {' '.join(tokens)!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise GraphParseError("missing vertex count", 1)
    lineno, head = lines[0]
    if len(head) != 1:
        raise GraphParseError("first line must hold only the vertex count", lineno)
    (n,) = _ints(head, lineno)
    if n < 0:
        raise GraphParseError("negative vertex count", lineno)
    edges: set[Edge] = set()
    for lineno, tokens in lines[1:]:
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got {' '.join(tokens)!r}", lineno)
        u, v = _ints(tokens, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"endpoint out of range in ({u}, {v})", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        e = (min(u, v), max(u, v))
        if e in edges:
            raise GraphParseError(f"duplicate edge ({u}, {v})", lineno)
        edges.add(e)
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    out = [str(g.n)]
    out += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


def parse_coloring(text: str) -> dict[Edge, int]:
    colors: dict[Edge, int] = {}
    for lineno, tokens in _content_lines(text):
        if len(tokens) != 3:
            raise GraphParseError(f"expected 'u v c', got {' '.join(tokens)!r}", lineno)
        u, v, c = _ints(tokens, lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if c < 0:
            raise GraphParseError(f"negative color {c}", lineno)
        e = (min(u, v), max(u, v))
        if e in colors:
            raise GraphParseError(f"duplicate edge ({u}, {v})", lineno)
        colors[e] = c
    return colors


def read_coloring(path: str | Path) -> dict[Edge, int]:
    return parse_coloring(Path(path).read_text())


def write_coloring(colors: Iterable[tuple[int, int, int]], out: TextIO) -> None:
    for u, v, c in colors:
        out.write(f"{u} {v} {c}\n")


def dumps_report(report: dict) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps_report(report))
