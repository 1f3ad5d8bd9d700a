"""Search for monochromatic dense block structures in colored blow-ups."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from ..graph import Graph
from .host import BlowupHost
from .predicates import check_dense_matrix, subset_size


@dataclass
class BlockStructure:
    """Vertex blocks indexed by a target graph with one-colored pair blocks.

    ``parts[a]`` lists host vertices of block ``a``; for every target edge
    ``(a, b)`` with ``a < b``, ``blocks[(a, b)][i, j]`` says whether
    ``parts[a][i]`` and ``parts[b][j]`` are joined by an edge of ``color``.
    """

    target: Graph
    color: int
    parts: list[np.ndarray]
    blocks: dict[tuple[int, int], np.ndarray]
    base_map: tuple[int, ...] = ()

    def block(self, a: int, b: int) -> np.ndarray:
        """Matrix with rows in block ``a`` and columns in block ``b``."""
        if a < b:
            return self.blocks[(a, b)]
        return self.blocks[(b, a)].T

    def part_size(self, a: int) -> int:
        return len(self.parts[a])

    def summary(self) -> dict:
        return {
            "color": self.color,
            "target_vertices": self.target.n,
            "part_sizes": sorted({len(p) for p in self.parts}),
            "base_map": list(self.base_map),
        }


def structure_from_host(host: BlowupHost, color: int, target: Graph | None = None) -> BlockStructure:
    """Whole-part structure of a host whose base is the target itself."""
    target = target or host.base
    if target.n != host.base.n or set(target.edges) - set(host.cross):
        raise InputError("target must be a spanning subgraph of the host base")
    parts = [host.part(x) for x in range(target.n)]
    blocks = {}
    for e in target.sorted_edges():
        blocks[e] = host.colors[e] == color if host.colors is not None else host.cross[e].copy()
    return BlockStructure(target, color, parts, blocks, tuple(range(target.n)))


def find_injective_homomorphism(
    pattern: Graph, target: Graph, budget: int = 200_000, prefer: list[int] | None = None
) -> list[int] | None:
    """Injective map sending pattern edges to target edges, by backtracking.

    Vertices are placed in BFS order; candidates are tried with the
    preferred image first (identity by default) and then by index.
    Returns ``None`` if none exists or the node budget runs out.
    """
    if pattern.n > target.n:
        return None
    prefer = list(range(pattern.n)) if prefer is None else prefer
    order = pattern.bfs_order(0) if pattern.n else []
    image = [-1] * pattern.n
    used = [False] * target.n
    nodes = 0

    def candidates(v: int) -> list[int]:
        placed = [image[w] for w in pattern.neighbors(v) if image[w] >= 0]
        if placed:
            pool = set(target.neighbors(placed[0]))
            for w in placed[1:]:
                pool &= target.neighbors(w)
        else:
            pool = set(range(target.n))
        pool = sorted(c for c in pool if not used[c] and target.degree(c) >= pattern.degree(v))
        p = prefer[v] if v < len(prefer) else -1
        if p in pool:
            pool.remove(p)
            pool.insert(0, p)
        return pool

    def place(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        nodes += 1
        if nodes > budget:
            return False
        v = order[i]
        for c in candidates(v):
            image[v], used[c] = c, True
            if place(i + 1):
                return True
            image[v], used[c] = -1, False
        return False

    return image if place(0) else None


@dataclass
class StructureResult:
    success: bool
    structure: BlockStructure | None
    diagnostics: dict = field(default_factory=dict)


def admissible_colors(host: BlowupHost, alpha: float) -> dict[tuple[int, int], list[int]]:
    """Colors whose density on a base pair reaches ``alpha * p``."""
    if host.colors is None:
        raise InputError("host is not colored")
    need = alpha * host.p * host.m * host.m - 1e-9
    out = {}
    for e, C in host.colors.items():
        counts = np.bincount(C[C >= 0].ravel(), minlength=host.k)
        out[e] = [c for c in range(host.k) if counts[c] >= need]
    return out


def find_monochromatic_dense_structure(
    host: BlowupHost,
    target: Graph,
    eps: float,
    alpha: float,
    lam: float,
    seed: int = 0,
    retries: int = 20,
    restarts: int = 4,
    hom_budget: int = 200_000,
    prefer: list[int] | None = None,
) -> StructureResult:
    """Blocks ``U_x`` of size ``ceil(lam * m)`` over a copy of ``target`` whose
    pairs are ``(eps, alpha, p)``-dense in one common color.

    A color is admissible on a base pair when its density there is at least
    ``alpha * p``. Colors are tried by total edge count (plurality first);
    for each, the target is mapped injectively onto base pairs admissible
    in that color, and random ``lam``-fractions of the parts are drawn and
    checked, redrawing up to ``retries`` times. ``prefer`` gives the first
    image tried for each target vertex (identity by default).
    """
    if not 0 < lam <= 1:
        raise InputError("lam must lie in (0, 1]")
    adm = admissible_colors(host, alpha)
    totals = [0] * host.k
    for C in host.colors.values():
        counts = np.bincount(C[C >= 0].ravel(), minlength=host.k)
        for c in range(host.k):
            totals[c] += int(counts[c])
    order = sorted(range(host.k), key=lambda c: (-totals[c], c))
    size = max(1, subset_size(lam, host.m))
    rng = np.random.default_rng(seed)
    diag: dict = {"colors_tried": [], "subset_size": size, "color_totals": totals}
    for color in order:
        allowed = Graph.from_edges(host.base.n, [e for e, cs in adm.items() if color in cs])
        image = find_injective_homomorphism(target, allowed, hom_budget, prefer)
        attempt = {"color": color, "admissible_pairs": allowed.num_edges, "mapped": image is not None}
        diag["colors_tried"].append(attempt)
        if image is None:
            continue
        failures = []
        for r in range(retries + 1):
            if size == host.m:
                picks = [np.arange(host.m) for _ in range(target.n)]
            else:
                picks = [np.sort(rng.choice(host.m, size=size, replace=False)) for _ in range(target.n)]
            blocks = {}
            failed = None
            for a, b in target.sorted_edges():
                x, y = image[a], image[b]
                C = host.colors[(min(x, y), max(x, y))]
                if x > y:
                    C = C.T
                B = C[np.ix_(picks[a], picks[b])] == color
                cert = check_dense_matrix(
                    B, eps, alpha, host.p, "sampled", int(rng.integers(2**31)), restarts
                )
                if not cert.passed:
                    failed = {"pair": [a, b], "witness_density": cert.witness_density}
                    break
                blocks[(a, b)] = B
            if failed is None:
                parts = [image[a] * host.m + picks[a] for a in range(target.n)]
                attempt["retries_used"] = r
                return StructureResult(
                    True, BlockStructure(target, color, parts, blocks, tuple(image)), diag
                )
            failures.append(failed)
            if size == host.m:
                break
        attempt["failures"] = failures[:5]
        attempt["failure_count"] = len(failures)
    diag["reason"] = "no color admitted a dense copy of the target"
    return StructureResult(False, None, diag)
