"""Embedding bounded-degree graphs into ``tree ⊠ clique`` products.

Pipeline: :func:`compute_s` fixes the bag budget, :func:`recursive_partition`
splits the graph into bags along a binary tree so that every edge joins
bags at tree distance at most ``k``, and :func:`tree_power_factorization`
folds the ``k``-th power of that tree into a bounded-degree tree times a
clique. :func:`embed_into_product` composes the three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputError, PartitionInvariantError
from .graph import Graph, ProductEmbedding, verify_product_embedding
from .separators import (
    TreewidthProfile,
    colored_separator,
    log_levels,
    ordering_bound,
)
from .treedecomp import TreeDecomposition


@dataclass(frozen=True)
class SParameters:
    n: int
    max_degree: int
    k: int
    s: int
    case: str
    case_ii_bound: float | None = None
    case_ii_lower: float | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_degree": self.max_degree,
            "k": self.k,
            "s": self.s,
            "case": self.case,
            "case_ii_bound": self.case_ii_bound,
            "case_ii_lower": self.case_ii_lower,
        }


def reach_parameter(max_degree: int) -> int:
    """``ceil(log2(max_degree)) + 2``, exact for integers."""
    return (max_degree - 1).bit_length() + 2


def compute_s(n: int, max_degree: int, profile: TreewidthProfile) -> SParameters:
    if n < 1:
        raise InputError("n must be at least 1")
    if max_degree < 2:
        raise InputError("maximum degree bound must be at least 2")
    k = reach_parameter(max_degree)
    s = math.floor(k + k * ordering_bound(n, profile) + 1e-9)
    if profile.alpha is None:
        return SParameters(n, max_degree, k, s, "i" if profile.kind == "const" else "general")
    tn = profile.t(n)
    upper = k + k / (1 - (2 / 3) ** profile.alpha) * tn + k * (log_levels(n) + 1)
    return SParameters(n, max_degree, k, s, "ii", upper, k * (tn + 1))


@dataclass(frozen=True)
class VertexPartitionTree:
    """Bags along a rooted binary tree; node 0 is the root, numbering is preorder."""

    tree: Graph
    bags: tuple[frozenset[int], ...]
    k: int
    s: int
    stats: dict = field(default_factory=dict, compare=False)

    def violations(self, g: Graph) -> list[str]:
        out = []
        t = self.tree
        if t.n != len(self.bags) or t.n == 0 or not t.is_tree():
            return ["partition tree is not a tree with one bag per node"]
        if t.n > 1 and t.degree(0) > 2 or any(t.degree(v) > 3 for v in range(t.n)):
            out.append("partition tree is not binary")
        owner: dict[int, int] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                if v in owner:
                    out.append(f"vertex {v} lies in bags {owner[v]} and {i}")
                owner[v] = i
            leaf = i != 0 and t.degree(i) == 1 or t.n == 1
            if not leaf and len(bag) != 2 * self.s:
                out.append(f"non-leaf bag {i} has {len(bag)} vertices, expected {2 * self.s}")
            if len(bag) > 2 * self.s:
                out.append(f"bag {i} has {len(bag)} > {2 * self.s} vertices")
        missing = set(range(g.n)) - set(owner)
        if missing:
            out.append(f"vertices {sorted(missing)[:5]} lie in no bag")
            return out
        dist: dict[int, dict[int, int]] = {}
        for u, v in g.sorted_edges():
            a, b = owner[u], owner[v]
            if a not in dist:
                dist[a] = t.bfs_distances(a, self.k)
            if b not in dist[a]:
                out.append(f"edge ({u}, {v}) joins bags {a} and {b} farther than {self.k} apart")
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "s": self.s,
            "tree_edges": [list(e) for e in self.tree.sorted_edges()],
            "bags": [sorted(b) for b in self.bags],
        }


def recursive_partition(
    g: Graph,
    max_degree: int,
    profile: TreewidthProfile,
    s: int | None = None,
    td: TreeDecomposition | None = None,
) -> VertexPartitionTree:
    """Partition ``V(g)`` into bags of size ``2s`` along a binary tree.

    Each call carries ``k`` disjoint classes with ``|C_i| <= 2**(i-1) * s``;
    members of ``C_i`` must land within tree distance ``i - 1`` of the
    current root. ``s`` overrides the computed budget (useful to force the
    recursion on small inputs; too small a value surfaces as
    :class:`PartitionInvariantError`).
    """
    if g.max_degree > max_degree:
        raise InputError(f"graph has degree {g.max_degree} > {max_degree}")
    params = compute_s(max(g.n, 1), max_degree, profile)
    k = params.k
    if s is None:
        s = params.s
    if s < 1:
        raise InputError("s must be positive")
    nodes: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    stats = {"calls": 0, "max_separator": 0}

    def build(vs: list[int], classes: list[set[int]], sub_td: TreeDecomposition | None) -> int:
        stats["calls"] += 1
        for i, cls in enumerate(classes):
            if len(cls) > 2**i * s:
                raise PartitionInvariantError(
                    f"class {i + 1} has {len(cls)} > {2**i * s} vertices on a subgraph of {len(vs)}"
                )
        me = len(nodes)
        if len(vs) <= 2 * s:
            nodes.append(frozenset(vs))
            return me
        h, _ = g.induced(vs)
        local = {v: i for i, v in enumerate(vs)}
        coloring: list[int | None] = [None] * len(vs)
        for i, cls in enumerate(classes):
            for v in cls:
                coloring[local[v]] = i
        trip = colored_separator(h, coloring, k, profile, sub_td)
        stats["max_separator"] = max(stats["max_separator"], len(trip.S))
        if len(trip.S) > s or len(classes[0]) > s:
            raise PartitionInvariantError(
                f"separator of {len(trip.S)} or first class of {len(classes[0])} exceeds s={s}"
            )
        x = {vs[v] for v in trip.S} | classes[0]
        for v in vs:
            if len(x) >= 2 * s:
                break
            x.add(v)
        nodes.append(frozenset(x))
        boundary = g.neighborhood(x) - x
        for side in (trip.A, trip.B):
            part = sorted(vs[v] for v in side if vs[v] not in x)
            if not part:
                continue
            keep = set(part)
            shifted = [cls & keep for cls in classes[1:]]
            used = set().union(*shifted) if shifted else set()
            shifted.append((boundary & keep) - used)
            child_td = None
            if sub_td is not None:
                child_td = sub_td.restrict([local[v] for v in part])
            child = build(part, shifted, child_td)
            edges.append((me, child))
        return me

    build(list(range(g.n)), [set() for _ in range(k)], td)
    tree = Graph.from_edges(len(nodes), edges)
    return VertexPartitionTree(tree, tuple(nodes), k, s, stats)


@dataclass(frozen=True)
class TreeFactorization:
    """Map of a rooted tree ``T`` into a tree ``T'`` such that vertices at
    distance at most ``k`` in ``T`` land on equal or adjacent nodes."""

    tree: Graph
    node_map: tuple[int, ...]
    multiplicity: int
    k: int
    root: int

    def violations(self, source: Graph) -> list[str]:
        out = []
        for u in range(source.n):
            for v, d in source.bfs_distances(u, self.k).items():
                a, b = self.node_map[u], self.node_map[v]
                if v > u and a != b and not self.tree.has_edge(a, b):
                    out.append(f"nodes {u}, {v} at distance {d} map to {a}, {b}")
        return out


def _tree_root(t: Graph) -> int:
    if t.n == 0:
        raise InputError("empty tree")
    if t.degree(0) <= 2:
        return 0
    return min(v for v in range(t.n) if t.degree(v) <= 2)


def tree_power_factorization(t: Graph, k: int) -> TreeFactorization:
    """Fold ``T^k`` into ``T' ⊠ K_m`` for a tree ``T`` of maximum degree 3.

    ``T`` is cut into depth windows of height ``k``; ``T'`` is the tree of
    windows, and each vertex maps to the window above its own (the top
    window maps to itself). Any two vertices within distance ``k`` then
    land on equal or adjacent windows. ``m`` is the measured largest
    preimage, at most ``2**(2k) - 1``; ``T'`` has maximum degree at most
    ``1 + 2**k``.
    """
    if k < 1:
        raise InputError("k must be positive")
    if not t.is_tree():
        raise InputError("input is not a tree")
    if t.max_degree > 3:
        raise InputError("input tree is not binary (degree above 3)")
    root = _tree_root(t)
    if k == 1:
        return TreeFactorization(t, tuple(range(t.n)), 1, 1, root)
    parent = {root: root}
    depth = {root: 0}
    order = [root]
    for v in order:
        for w in sorted(t.neighbors(v)):
            if w not in parent:
                parent[w], depth[w] = v, depth[v] + 1
                order.append(w)
    block_root: dict[int, int] = {}
    for v in order:
        block_root[v] = v if depth[v] % k == 0 else block_root[parent[v]]
    roots = [v for v in order if block_root[v] == v]
    index = {r: i for i, r in enumerate(roots)}
    up = {r: index[block_root[parent[r]]] for r in roots}
    up[root] = 0
    block_edges = [(index[r], up[r]) for r in roots if r != root]
    node_map = tuple(up[block_root[v]] for v in range(t.n))
    counts: dict[int, int] = {}
    for b in node_map:
        counts[b] = counts.get(b, 0) + 1
    return TreeFactorization(
        Graph.from_edges(len(roots), block_edges), node_map, max(counts.values()), k, root
    )


def embed_into_product(
    g: Graph,
    max_degree: int,
    profile: TreewidthProfile,
    s: int | None = None,
    td: TreeDecomposition | None = None,
) -> ProductEmbedding:
    """Certified embedding ``g ⊆ T' ⊠ K_{s'}`` with ``T'`` of bounded degree."""
    params = compute_s(max(g.n, 1), max_degree, profile)
    part = recursive_partition(g, max_degree, profile, s=s, td=td)
    s_used = part.s
    k = params.k
    cert = {
        "k": k,
        "s": s_used,
        "s_formula": params.s,
        "case": params.case,
        "case_ii_bound": params.case_ii_bound,
        "partition_nodes": part.tree.n,
        "max_separator": part.stats["max_separator"],
        "bound_tree_vertices": g.n / s_used + 1,
        "bound_tree_max_degree": 1 + 2**k,
        "bound_multiplicity": 2 ** (2 * k) - 1,
    }
    if part.tree.n == 1:
        tree = Graph.empty(1)
        node = (0,) * g.n
        slot = tuple(range(g.n))
        s_prime = max(g.n, 1)
        cert["multiplicity"] = 1
    else:
        fact = tree_power_factorization(part.tree, k)
        rank: dict[int, int] = {}
        seen: dict[int, int] = {}
        for v in range(part.tree.n):
            b = fact.node_map[v]
            rank[v] = seen.get(b, 0)
            seen[b] = rank[v] + 1
        node_l = [0] * g.n
        slot_l = [0] * g.n
        for v, bag in enumerate(part.bags):
            for j, x in enumerate(sorted(bag)):
                node_l[x] = fact.node_map[v]
                slot_l[x] = rank[v] * 2 * s_used + j
        tree, node, slot = fact.tree, tuple(node_l), tuple(slot_l)
        s_prime = fact.multiplicity * 2 * s_used
        cert["multiplicity"] = fact.multiplicity
    cert.update(
        s_prime=s_prime,
        tree_vertices=tree.n,
        tree_max_degree=tree.max_degree,
        tree_vertices_ok=tree.n <= g.n / s_used + 1 + 1e-9,
        tree_max_degree_ok=tree.max_degree <= 1 + 2**k,
    )
    pe = ProductEmbedding(g, tree, s_prime, node, slot, cert)
    report = verify_product_embedding(pe)
    cert["verified"] = report["pass"]
    return pe

