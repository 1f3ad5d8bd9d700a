"""Splitting ``H`` into embedding classes for the sparse embedder.

Given ``H ⊆ R ⊠ K_s``, the vertices over each ``x ∈ V(R)`` are colored
greedily in the cube of ``H`` (so same-colored vertices are at distance at
least 4) and then split by how many neighbours get embedded before them.
Class ``j`` over ``x`` is ``color * (Δ + 1) + left_degree``; the global
class index concatenates the per-vertex blocks along a BFS order of ``R``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..graph import Graph, check_strong_product_map, graph_power


def class_bound(max_degree: int) -> int:
    """Classes per base vertex: ``Δ^4 + 2Δ + 1``."""
    d = max_degree
    return d**4 + 2 * d + 1


def cube_color_bound(max_degree: int) -> int:
    """Colors needed for the cube of a max-degree ``Δ`` graph: ``Δ^3 - Δ^2 + Δ + 1``."""
    d = max_degree
    return d**3 - d**2 + d + 1


@dataclass(frozen=True)
class HPreparation:
    """Embedding classes of ``H``.

    ``g[u]`` is the global class of ``u`` (0-based, ``position * classes_per_vertex + j``),
    ``local[u] = j`` its index inside the block of its base vertex and
    ``left_degree[u]`` the number of neighbours in strictly earlier classes.
    """

    base: Graph
    max_degree: int
    classes_per_vertex: int
    order: tuple[int, ...]
    parents: tuple[tuple[int, ...], ...]
    node: tuple[int, ...]
    cube_color: tuple[int, ...]
    local: tuple[int, ...]
    g: tuple[int, ...]
    left_degree: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return self.base.n * self.classes_per_vertex

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for u, c in enumerate(self.g):
            out[c].append(u)
        return out

    def target_vertex(self, u: int) -> int:
        """Vertex of ``R ⊠ K_classes`` hosting ``u``: ``node * classes + local``."""
        return self.node[u] * self.classes_per_vertex + self.local[u]

    def violations(self, h: Graph) -> list[str]:
        out = []
        if len(self.g) != h.n:
            return [f"class map covers {len(self.g)} of {h.n} vertices"]
        per_node: dict[int, set[int]] = {}
        for u in range(h.n):
            if not 0 <= self.local[u] < self.classes_per_vertex:
                out.append(f"vertex {u} has local class {self.local[u]} out of range")
            if self.g[u] != self.order.index(self.node[u]) * self.classes_per_vertex + self.local[u]:
                out.append(f"vertex {u} global class disagrees with its base vertex")
            per_node.setdefault(self.node[u], set()).add(self.local[u])
        for x, used in per_node.items():
            if len(used) > self.classes_per_vertex:
                out.append(f"base vertex {x} carries {len(used)} classes")
        for u in range(h.n):
            for w, d in h.bfs_distances(u, 3).items():
                if w > u and self.g[w] == self.g[u]:
                    out.append(f"vertices {u} and {w} share class {self.g[u]} at distance {d}")
            earlier = sum(1 for w in h.neighbors(u) if self.g[w] < self.g[u])
            if earlier != self.left_degree[u]:
                out.append(f"vertex {u} left degree {self.left_degree[u]} != {earlier}")
        for members in self.classes():
            if len({self.left_degree[u] for u in members}) > 1:
                out.append(f"class of {members[0]} mixes left degrees")
        return out

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "classes_per_vertex": self.classes_per_vertex,
            "order": list(self.order),
            "g": list(self.g),
            "local": list(self.local),
            "left_degree": list(self.left_degree),
        }


def base_order(base: Graph, root: int = 0) -> tuple[list[int], list[tuple[int, ...]]]:
    """BFS order of ``base`` and, per vertex, its neighbours placed earlier."""
    order = base.bfs_order(root) if base.n else []
    pos = {x: i for i, x in enumerate(order)}
    parents = [tuple(sorted(y for y in base.neighbors(x) if pos[y] < pos[x])) for x in range(base.n)]
    return order, parents


def prepare_H(
    h: Graph,
    base: Graph,
    node: list[int] | tuple[int, ...],
    slot: list[int] | tuple[int, ...],
    size: int,
    max_degree: int,
    root: int = 0,
) -> HPreparation:
    """Embedding classes of ``h`` from a witness ``h ⊆ base ⊠ K_size``."""
    bad = check_strong_product_map(h, base, size, node, slot)
    if bad:
        raise InputError(f"invalid product witness: {bad[0]}")
    if h.max_degree > max_degree:
        raise InputError(f"graph has degree {h.max_degree} > {max_degree}")
    per = class_bound(max_degree)
    order, parents = base_order(base, root)
    pos = {x: i for i, x in enumerate(order)}
    members: dict[int, list[int]] = {}
    for u in range(h.n):
        members.setdefault(node[u], []).append(u)
    cube = graph_power(h, 3) if h.n else h
    color = [0] * h.n
    for x, us in members.items():
        inside = set(us)
        for u in us:
            taken = {color[w] for w in cube.neighbors(u) if w in inside and w < u}
            c = 0
            while c in taken:
                c += 1
            color[u] = c
    local = [0] * h.n
    ld = [0] * h.n
    for u in range(h.n):
        x = node[u]
        before = set(parents[x])
        ld[u] = sum(
            1 for w in h.neighbors(u)
            if node[w] in before or (node[w] == x and color[w] < color[u])
        )
        local[u] = color[u] * (max_degree + 1) + ld[u]
    g = [pos[node[u]] * per + local[u] for u in range(h.n)]
    return HPreparation(
        base, max_degree, per, tuple(order), tuple(parents), tuple(node),
        tuple(color), tuple(local), tuple(g), tuple(ld),
    )
