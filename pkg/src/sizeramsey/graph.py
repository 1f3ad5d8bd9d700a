"""Immutable simple graphs on dense integer vertices and basic operations.

Vertices are always ``0..n-1``. Every operation returns a new graph; nothing
here mutates its input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError

Edge = tuple[int, int]

# all-pairs distance tables are refused above this many vertices
ALL_PAIRS_LIMIT = 10_000


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``. Build graphs
    through :meth:`from_edges`, which validates and normalizes.
    """

    n: int
    edges: frozenset[Edge]
    _adj: tuple[frozenset[int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InputError(f"invalid edge ({u}, {v}) for n={self.n}")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        norm = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"endpoint out of range in edge ({u}, {v})")
            norm.add(_norm(u, v))
        return cls(n, frozenset(norm))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    # accessors -----------------------------------------------------------

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..len-1`` in increasing order.

        Returns the subgraph and the list mapping new labels to old ones.
        """
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        edges = [
            (new_of[u], new_of[w])
            for u in old
            for w in self._adj[u]
            if w in new_of and u < w
        ]
        return Graph(len(old), frozenset(edges)), old

    def neighborhood(self, vertices: Iterable[int]) -> set[int]:
        """Vertices outside ``vertices`` adjacent to at least one of them."""
        vs = set(vertices)
        out: set[int] = set()
        for v in vs:
            out |= self._adj[v]
        return out - vs

    # traversal -----------------------------------------------------------

    def bfs_distances(self, source: int, limit: int | None = None) -> dict[int, int]:
        """Distances from ``source``; stops expanding beyond ``limit``."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            d = dist[u]
            if limit is not None and d >= limit:
                continue
            for w in sorted(self._adj[u]):
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def bfs_order(self, root: int = 0) -> list[int]:
        """Breadth-first order of every vertex, restarting at the lowest
        unvisited vertex when a component is exhausted."""
        seen = [False] * self.n
        order: list[int] = []
        starts = [root] + [v for v in range(self.n) if v != root] if self.n else []
        for s in starts:
            if seen[s]:
                continue
            seen[s] = True
            queue = deque([s])
            while queue:
                u = queue.popleft()
                order.append(u)
                for w in sorted(self._adj[u]):
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        return order

    def components(self, allowed: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components of the subgraph induced by ``allowed``.

        Components are sorted internally and listed by smallest vertex.
        """
        allowed_set = set(range(self.n)) if allowed is None else set(allowed)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed_set):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w in allowed_set and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.n >= 1 and self.num_edges == self.n - 1 and self.is_connected()

    def all_pairs_distances(self) -> list[dict[int, int]]:
        if self.n > ALL_PAIRS_LIMIT:
            raise InputError(
                f"refusing all-pairs distances on {self.n} vertices "
                f"(limit {ALL_PAIRS_LIMIT})"
            )
        return [self.bfs_distances(v) for v in range(self.n)]


# constructors --------------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int | None = None) -> Graph:
    """``rows x cols`` grid; vertex ``r*cols + c`` sits at row r, column c."""
    cols = rows if cols is None else cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def complete_binary_tree(depth: int) -> Graph:
    """Complete binary tree with ``depth`` levels below the root (heap order)."""
    n = 2 ** (depth + 1) - 1
    return Graph.from_edges(n, [((i - 1) // 2, i) for i in range(1, n)])


# operations ----------------------------------------------------------------


def strong_product(g: Graph, h: Graph) -> Graph:
    """Strong product ``g ⊠ h``.

    Vertex ``(a, b)`` is numbered ``a * h.n + b``. Two distinct vertices are
    adjacent when each coordinate is equal or adjacent.
    """
    m = h.n
    edges: set[Edge] = set()
    for a in range(g.n):
        for b1, b2 in h.edges:
            edges.add(_norm(a * m + b1, a * m + b2))
    for a1, a2 in g.edges:
        for b in range(m):
            edges.add(_norm(a1 * m + b, a2 * m + b))
        for b1, b2 in h.edges:
            edges.add(_norm(a1 * m + b1, a2 * m + b2))
            edges.add(_norm(a1 * m + b2, a2 * m + b1))
    return Graph(g.n * m, frozenset(edges))


def graph_power(g: Graph, k: int) -> Graph:
    """Graph on V(g) joining vertices at distance between 1 and ``k``."""
    if k < 1:
        raise InputError("power must be at least 1")
    edges = set()
    for v in range(g.n):
        for w, d in g.bfs_distances(v, limit=k).items():
            if 1 <= d <= k and v < w:
                edges.add((v, w))
    return Graph(g.n, frozenset(edges))


def greedy_coloring(g: Graph, order: Sequence[int] | None = None) -> list[int]:
    """First-fit proper coloring following ``order`` (default: 0..n-1)."""
    order = list(range(g.n)) if order is None else list(order)
    if sorted(order) != list(range(g.n)):
        raise InputError("order must be a permutation of the vertices")
    color = [-1] * g.n
    for v in order:
        used = {color[w] for w in g.neighbors(v) if color[w] >= 0}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


def is_proper_coloring(g: Graph, color: Sequence[int]) -> bool:
    return all(color[u] != color[v] for u, v in g.edges)


# edge colorings -------------------------------------------------------------


@dataclass(frozen=True)
class EdgeColoring:
    """Total assignment of colors ``0..k-1`` to the edges of ``graph``."""

    graph: Graph
    k: int
    colors: dict[Edge, int]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError("number of colors must be positive")
        if set(self.colors) != set(self.graph.edges):
            raise InputError("coloring must cover exactly the edge set")
        bad = [e for e, c in self.colors.items() if not 0 <= c < self.k]
        if bad:
            raise InputError(f"color out of range on edge {bad[0]}")

    def color(self, u: int, v: int) -> int:
        return self.colors[_norm(u, v)]


# product embeddings ----------------------------------------------------------


@dataclass(frozen=True)
class ProductEmbedding:
    """Injective map of ``source`` into ``tree ⊠ K_clique_size``.

    ``node[v]`` is the tree vertex and ``slot[v]`` the clique slot of ``v``.
    """

    source: Graph
    tree: Graph
    clique_size: int
    node: tuple[int, ...]
    slot: tuple[int, ...]
    certificate: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {
            "kind": "product",
            "source": {"n": self.source.n, "edges": [list(e) for e in self.source.sorted_edges()]},
            "tree_n": self.tree.n,
            "tree_edges": [list(e) for e in self.tree.sorted_edges()],
            "s_prime": self.clique_size,
            "assignment": [[a, b] for a, b in zip(self.node, self.slot)],
        }
        if self.certificate:
            out["certificate"] = self.certificate
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ProductEmbedding":
        src = Graph.from_edges(data["source"]["n"], data["source"]["edges"])
        tree = Graph.from_edges(data["tree_n"], data["tree_edges"])
        assignment = data["assignment"]
        return cls(
            source=src,
            tree=tree,
            clique_size=int(data["s_prime"]),
            node=tuple(int(a) for a, _ in assignment),
            slot=tuple(int(b) for _, b in assignment),
            certificate=dict(data.get("certificate", {})),
        )


def check_strong_product_map(
    source: Graph, base: Graph, size: int, node: Sequence[int], slot: Sequence[int]
) -> list[str]:
    """Violations of ``source ⊆ base ⊠ K_size`` under the given map."""
    violations = []
    if len(node) != source.n or len(slot) != source.n:
        return [f"assignment length {len(node)} does not match {source.n} vertices"]
    for v in range(source.n):
        if not 0 <= node[v] < base.n:
            violations.append(f"range: vertex {v} mapped to missing node {node[v]}")
        if not 0 <= slot[v] < size:
            violations.append(f"range: vertex {v} uses slot {slot[v]} >= {size}")
    if violations:
        return violations
    seen: dict[tuple[int, int], int] = {}
    for v in range(source.n):
        key = (node[v], slot[v])
        if key in seen:
            violations.append(f"injectivity: vertices {seen[key]} and {v} share image {key}")
        else:
            seen[key] = v
    for u, v in source.sorted_edges():
        a, b = node[u], node[v]
        if a != b and not base.has_edge(a, b):
            violations.append(f"adjacency: edge ({u}, {v}) maps to nodes {a}, {b}")
    return violations


def verify_product_embedding(pe: ProductEmbedding) -> dict:
    """Certificate report for a product embedding.

    The report has keys ``pass``, ``violations`` and ``metrics``; invariant
    failures are listed, never raised.
    """
    violations = []
    if pe.tree.n == 0:
        violations.append("tree: empty")
    elif not pe.tree.is_tree():
        violations.append("tree: not acyclic and connected")
    if pe.clique_size < 1:
        violations.append("clique: size must be positive")
    violations += check_strong_product_map(
        pe.source, pe.tree, max(pe.clique_size, 0), pe.node, pe.slot
    )
    metrics = {
        "tree_vertices": pe.tree.n,
        "tree_max_degree": pe.tree.max_degree,
        "clique_size": pe.clique_size,
        "source_vertices": pe.source.n,
        "source_edges": pe.source.num_edges,
    }
    return {"pass": not violations, "violations": violations, "metrics": metrics}
