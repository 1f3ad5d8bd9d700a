"""Blow-up host graphs and their edge colorings.

A blow-up replaces every base vertex ``x`` by a part of ``m`` host vertices
``x*m .. x*m + m - 1`` and every base edge by a random bipartite graph.
Cross edges are stored per base edge as an ``m x m`` boolean matrix (rows
belong to the smaller base vertex), colors as an ``int8`` matrix with
``-1`` marking a non-edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from ..errors import InputError, SizeGuardError
from ..graph import Graph
from ..io import parse_coloring

ADVERSARIAL_EDGE_LIMIT = 300_000


@dataclass
class BlowupHost:
    base: Graph
    m: int
    p: float
    complete_parts: bool
    seed: int
    cross: dict[tuple[int, int], np.ndarray]
    colors: dict[tuple[int, int], np.ndarray] | None = None
    inner_colors: list[np.ndarray] | None = None
    k: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.base.n * self.m

    def part(self, x: int) -> np.ndarray:
        return np.arange(x * self.m, (x + 1) * self.m)

    def part_of(self, v: int) -> int:
        return v // self.m

    def cross_edge_count(self) -> int:
        return int(sum(int(M.sum()) for M in self.cross.values()))

    def inner_edge_count(self) -> int:
        return self.base.n * self.m * (self.m - 1) // 2 if self.complete_parts else 0

    def edge_count(self) -> int:
        return self.cross_edge_count() + self.inner_edge_count()

    def has_edge(self, u: int, v: int) -> bool:
        x, y = self.part_of(u), self.part_of(v)
        if x == y:
            return self.complete_parts and u != v
        if x > y:
            x, y, u, v = y, x, v, u
        M = self.cross.get((x, y))
        return bool(M is not None and M[u - x * self.m, v - y * self.m])

    def color(self, u: int, v: int) -> int:
        """Color of edge ``uv``; ``-1`` if absent."""
        if self.colors is None:
            raise InputError("host is not colored")
        x, y = self.part_of(u), self.part_of(v)
        if x == y:
            if not self.complete_parts or u == v:
                return -1
            return int(self.inner_colors[x][u - x * self.m, v - x * self.m])
        if x > y:
            x, y, u, v = y, x, v, u
        C = self.colors.get((x, y))
        return -1 if C is None else int(C[u - x * self.m, v - y * self.m])

    def edges(self):
        """Yield ``(u, v)`` with ``u < v`` in a fixed order."""
        m = self.m
        if self.complete_parts:
            for x in range(self.base.n):
                for i in range(m):
                    for j in range(i + 1, m):
                        yield x * m + i, x * m + j
        for (x, y) in sorted(self.cross):
            rows, cols = np.nonzero(self.cross[(x, y)])
            for i, j in zip(rows.tolist(), cols.tolist()):
                yield x * m + i, y * m + j

    def colored_edges(self):
        for u, v in self.edges():
            yield u, v, self.color(u, v)

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges())

    def color_counts(self) -> list[int]:
        counts = [0] * (self.k or 0)
        for C in self.colors.values():
            for c in range(self.k):
                counts[c] += int((C == c).sum())
        if self.inner_colors is not None:
            iu = np.triu_indices(self.m, 1)
            for C in self.inner_colors:
                vals = C[iu]
                for c in range(self.k):
                    counts[c] += int((vals == c).sum())
        return counts


def build_blowup_host(
    base: Graph, m: int, p: float, seed: int, complete_parts: bool
) -> BlowupHost:
    """Blow up ``base`` with parts of size ``m`` and cross density ``p``.

    ``complete_parts`` makes every part a clique (dense pipeline) instead of
    an independent set (sparse pipeline).
    """
    if m < 1:
        raise InputError("part size must be positive")
    if not 0 < p <= 1:
        raise InputError("p must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    cross = {}
    for e in base.sorted_edges():
        if p >= 1:
            cross[e] = np.ones((m, m), dtype=bool)
        else:
            cross[e] = rng.random((m, m)) < p
    return BlowupHost(base, m, p, complete_parts, seed, cross)


def color_host(
    host: BlowupHost,
    k: int,
    strategy: str = "random",
    seed: int = 0,
    path: str | Path | None = None,
) -> BlowupHost:
    """Color every host edge with one of ``k`` colors (in place; returns the host)."""
    if k < 1:
        raise InputError("k must be positive")
    host.k = k
    m = host.m
    if strategy == "random":
        rng = np.random.default_rng(seed)
        host.colors = {}
        for e in sorted(host.cross):
            C = rng.integers(0, k, size=(m, m)).astype(np.int8)
            C[~host.cross[e]] = -1
            host.colors[e] = C
        host.inner_colors = None
        if host.complete_parts:
            host.inner_colors = []
            for _ in range(host.base.n):
                C = rng.integers(0, k, size=(m, m)).astype(np.int8)
                C = np.triu(C, 1) + np.triu(C, 1).T
                np.fill_diagonal(C, -1)
                host.inner_colors.append(C.astype(np.int8))
    elif strategy == "adversarial-majority":
        _adversarial(host, k)
    elif strategy == "from-file":
        if path is None:
            raise InputError("from-file coloring needs a path")
        _from_mapping(host, parse_coloring(Path(path).read_text()), k)
    else:
        raise InputError(f"unknown coloring strategy {strategy!r}")
    host.meta["coloring"] = strategy
    return host


def _empty_colors(host: BlowupHost) -> None:
    m = host.m
    host.colors = {e: np.full((m, m), -1, dtype=np.int8) for e in sorted(host.cross)}
    host.inner_colors = (
        [np.full((m, m), -1, dtype=np.int8) for _ in range(host.base.n)]
        if host.complete_parts else None
    )


def _set_color(host: BlowupHost, u: int, v: int, c: int) -> None:
    m = host.m
    x, y = host.part_of(u), host.part_of(v)
    if x == y:
        host.inner_colors[x][u - x * m, v - x * m] = c
        host.inner_colors[x][v - x * m, u - x * m] = c
    else:
        if x > y:
            x, y, u, v = y, x, v, u
        host.colors[(x, y)][u - x * m, v - y * m] = c


def _adversarial(host: BlowupHost, k: int) -> None:
    """Greedy coloring that gives each edge the color currently rarest at
    its endpoints, starving whichever color would otherwise dominate."""
    if host.edge_count() > ADVERSARIAL_EDGE_LIMIT:
        raise SizeGuardError(f"adversarial coloring refused above {ADVERSARIAL_EDGE_LIMIT} edges")
    _empty_colors(host)
    deg = [[0] * k for _ in range(host.n)]
    for u, v in host.edges():
        du, dv = deg[u], deg[v]
        c = min(range(k), key=lambda i: (du[i] + dv[i], i))
        du[c] += 1
        dv[c] += 1
        _set_color(host, u, v, c)


def _from_mapping(host: BlowupHost, mapping: dict[tuple[int, int], int], k: int) -> None:
    edges = list(host.edges())
    if set(mapping) != set(edges):
        extra = sorted(set(mapping) - set(edges))[:3]
        missing = sorted(set(edges) - set(mapping))[:3]
        raise InputError(f"coloring does not match host edges (extra {extra}, missing {missing})")
    bad = [e for e, c in mapping.items() if c >= k]
    if bad:
        raise InputError(f"color outside [0, {k}) on edge {bad[0]}")
    _empty_colors(host)
    for (u, v), c in mapping.items():
        _set_color(host, u, v, c)


def write_host_coloring(host: BlowupHost, out: TextIO) -> None:
    for u, v, c in host.colored_edges():
        out.write(f"{u} {v} {c}\n")


def host_summary(host: BlowupHost) -> dict:
    out = {
        "base_vertices": host.base.n,
        "base_edges": [list(e) for e in host.base.sorted_edges()],
        "m": host.m,
        "p": host.p,
        "complete_parts": host.complete_parts,
        "seed": host.seed,
        "host_vertices": host.n,
        "cross_edges": host.cross_edge_count(),
        "inner_edges": host.inner_edge_count(),
        "edges": host.edge_count(),
    }
    if host.colors is not None:
        out["k"] = host.k
        out["color_counts"] = host.color_counts()
    return out
