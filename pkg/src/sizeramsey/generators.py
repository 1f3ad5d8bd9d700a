"""Instance families with optional product witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError
from .graph import Graph, ProductEmbedding, cycle_graph, grid_graph, path_graph
from .io import read_graph
from .treedecomp import TreeDecomposition, from_elimination_order

FAMILIES = ("grid", "random-bounded-tw", "tree", "path", "cycle", "from-file")


@dataclass
class Instance:
    graph: Graph
    witness: ProductEmbedding | None = None
    decomposition: TreeDecomposition | None = None
    meta: dict = field(default_factory=dict)


def grid_instance(a: int) -> Instance:
    """``a x a`` grid with rows mapped to the nodes of ``P_a``."""
    if a < 1:
        raise InputError("grid side must be positive")
    g = grid_graph(a)
    node = tuple(v // a for v in range(g.n))
    slot = tuple(v % a for v in range(g.n))
    return Instance(g, ProductEmbedding(g, path_graph(a), a, node, slot), meta={"side": a})


def path_instance(n: int, chunk: int) -> Instance:
    """Path cut into consecutive chunks over ``P_{ceil(n / chunk)}``."""
    if n < 1 or chunk < 1:
        raise InputError("path length and chunk must be positive")
    g = path_graph(n)
    node = tuple(v // chunk for v in range(n))
    slot = tuple(v % chunk for v in range(n))
    return Instance(g, ProductEmbedding(g, path_graph(math.ceil(n / chunk)), chunk, node, slot),
                    meta={"chunk": chunk})


def cycle_instance(n: int, chunk: int) -> Instance:
    """Cycle folded in half so both halves run along the same path nodes."""
    if n < 3 or chunk < 1:
        raise InputError("cycle needs at least 3 vertices and a positive chunk")
    half = (n + 1) // 2
    pos = [i if i < half else n - 1 - i for i in range(n)]
    node = [i // chunk for i in pos]
    taken: dict[int, int] = {}
    slot = []
    for v in range(n):
        slot.append(taken.get(node[v], 0))
        taken[node[v]] = slot[-1] + 1
    g = cycle_graph(n)
    tree = path_graph(math.ceil(half / chunk))
    return Instance(g, ProductEmbedding(g, tree, 2 * chunk, tuple(node), tuple(slot)),
                    meta={"chunk": chunk})


def random_bounded_tw(n: int, max_degree: int, width: int, seed: int) -> Instance:
    """Random subgraph of a random ``width``-tree with degrees capped.

    Vertices join one at a time, each attached to a random existing
    ``width``-clique; edges are then kept in random order while both ends
    have spare degree. Reverse insertion order eliminates with width at
    most ``width``, which gives the returned decomposition.
    """
    if n < 1 or max_degree < 1 or width < 1:
        raise InputError("n, degree bound and width must be positive")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    base = min(n, width + 1)
    cliques = [tuple(range(base))]
    edges += [(u, v) for u in range(base) for v in range(u + 1, base)]
    for v in range(base, n):
        c = cliques[int(rng.integers(len(cliques)))]
        if len(c) > width:
            drop = int(rng.integers(len(c)))
            c = c[:drop] + c[drop + 1:]
        edges += [(u, v) for u in c]
        cliques.append(tuple(sorted(c + (v,))))
    order = rng.permutation(len(edges))
    deg = [0] * n
    kept = []
    for i in order:
        u, v = edges[int(i)]
        if deg[u] < max_degree and deg[v] < max_degree:
            deg[u] += 1
            deg[v] += 1
            kept.append((u, v))
    g = Graph.from_edges(n, kept)
    td = from_elimination_order(g, list(range(n - 1, -1, -1)))
    return Instance(g, None, td, {"width_bound": width})


def random_tree(n: int, max_degree: int, seed: int) -> Instance:
    """Random recursive tree with degrees capped at ``max_degree`` (at least 2)."""
    if n < 1 or max_degree < 2:
        raise InputError("trees need n >= 1 and degree bound >= 2")
    rng = np.random.default_rng(seed)
    deg = [0] * n
    edges = []
    open_ = [0]
    for v in range(1, n):
        u = open_[int(rng.integers(len(open_)))]
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
        if deg[u] >= max_degree:
            open_.remove(u)
        open_.append(v)
    g = Graph.from_edges(n, edges)
    td = from_elimination_order(g, _leaf_order(g))
    return Instance(g, None, td, {"width_bound": 1})


def _leaf_order(t: Graph) -> list[int]:
    deg = [t.degree(v) for v in range(t.n)]
    done = [False] * t.n
    stack = sorted(v for v in range(t.n) if deg[v] <= 1)
    order = []
    while stack:
        v = stack.pop()
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        for w in t.neighbors(v):
            if not done[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    return order + [v for v in range(t.n) if not done[v]]


def generate_instance(
    family: str,
    n: int = 0,
    max_degree: int = 3,
    seed: int = 0,
    width: int = 3,
    chunk: int = 4,
    path: str | Path | None = None,
) -> Instance:
    """Build an instance of ``family``; ``n`` is the side length for grids."""
    if family == "grid":
        inst = grid_instance(n)
    elif family == "random-bounded-tw":
        inst = random_bounded_tw(n, max_degree, width, seed)
    elif family == "tree":
        inst = random_tree(n, max_degree, seed)
    elif family == "path":
        inst = path_instance(n, chunk)
    elif family == "cycle":
        inst = cycle_instance(n, chunk)
    elif family == "from-file":
        if path is None:
            raise InputError("from-file family needs a path")
        inst = Instance(read_graph(path))
    else:
        raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if inst.graph.max_degree > max_degree:
        raise InputError(f"instance has degree {inst.graph.max_degree} > {max_degree}")
    inst.meta.setdefault("family", family)
    return inst
