"""Embedding ``H`` into monochromatic block structures.

:func:`dense_embed` is the vertex-by-vertex procedure for complete-part
hosts; :func:`sparse_embed` is the class-by-class procedure with candidate
filtering and Hall matching for random sparse hosts. Both return an
:class:`EmbeddingResult`; failures carry witnesses instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from ..graph import Graph, complete_graph, strong_product
from .host import BlowupHost
from .matching import hall_matching
from .predicates import check_dense_matrix
from .prepare import HPreparation
from .structure import BlockStructure

DEFAULT_RECOMPUTE_LIMIT = 200


@dataclass
class EmbeddingResult:
    success: bool
    mapping: tuple[int, ...] | None
    color: int | None
    stage: str | None = None
    witness: dict | None = None
    log: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "mapping": None if self.mapping is None else list(self.mapping),
            "color": self.color,
            "stage": self.stage,
            "witness": self.witness,
            "stats": self.stats,
        }


def verify_host_embedding(h: Graph, host: BlowupHost, mapping, color: int) -> dict:
    """Check injectivity and that every ``h`` edge lands on a host edge of ``color``."""
    violations = []
    if mapping is None or len(mapping) != h.n:
        return {"pass": False, "violations": ["mapping missing or of wrong length"]}
    for u, v in enumerate(mapping):
        if not 0 <= v < host.n:
            violations.append(f"vertex {u} mapped outside the host ({v})")
    if violations:
        return {"pass": False, "violations": violations}
    if len(set(mapping)) != h.n:
        violations.append("mapping is not injective")
    for u, v in h.sorted_edges():
        a, b = int(mapping[u]), int(mapping[v])
        if not host.has_edge(a, b):
            violations.append(f"edge ({u}, {v}) maps to non-edge ({a}, {b})")
        elif host.color(a, b) != color:
            violations.append(f"edge ({u}, {v}) maps to ({a}, {b}) of color {host.color(a, b)}")
    return {"pass": not violations, "violations": violations[:20], "checked_edges": h.num_edges}


# dense -----------------------------------------------------------------------


def dense_target(tree: Graph, max_degree: int) -> Graph:
    """``tree ⊠ K_{Δ+1}``: one block per (tree node, color class)."""
    return strong_product(tree, complete_graph(max_degree + 1))


def dense_classes(h: Graph, node, max_degree: int) -> list[int]:
    """Block of each vertex: ``node * (Δ + 1) + greedy color inside its node``."""
    color = [0] * h.n
    for u in range(h.n):
        taken = {color[w] for w in h.neighbors(u) if w < u and node[w] == node[u]}
        c = 0
        while c in taken:
            c += 1
        color[u] = c
    if h.n and max(color) > max_degree:
        raise InputError("greedy coloring used more than Δ+1 colors")
    return [node[u] * (max_degree + 1) + color[u] for u in range(h.n)]


def dense_embed(h: Graph, structure: BlockStructure, classes, k: int) -> EmbeddingResult:
    """Embed ``h`` vertex by vertex, lowest index first.

    Each unembedded vertex ``x`` keeps a candidate set inside its block
    ``U``; with ``i`` embedded neighbours it must stay at least
    ``(1/(4k))^i |U|``. The image of the next vertex is the lowest-index
    unused candidate that keeps every unembedded neighbour above the next
    threshold.
    """
    if k < 1:
        raise InputError("k must be positive")
    t = structure.target
    for u, v in h.sorted_edges():
        a, b = classes[u], classes[v]
        if a == b or not t.has_edge(a, b):
            raise InputError(f"edge ({u}, {v}) joins blocks {a}, {b} that are not adjacent")
    frac = 1.0 / (4 * k)
    cand = [np.ones(structure.part_size(classes[u]), dtype=bool) for u in range(h.n)]
    hits = [0] * h.n
    used = {c: np.zeros(structure.part_size(c), dtype=bool) for c in set(classes)}
    image = [-1] * h.n
    worst = 1.0
    for x in range(h.n):
        cx = classes[x]
        pool = np.flatnonzero(cand[x] & ~used[cx])
        ok = np.ones(len(pool), dtype=bool)
        later = sorted(w for w in h.neighbors(x) if image[w] < 0)
        for w in later:
            cw = classes[w]
            need = frac ** (hits[w] + 1) * structure.part_size(cw)
            deg = structure.block(cx, cw)[pool][:, cand[w]].sum(axis=1)
            ok &= deg >= need - 1e-9
        good = pool[ok]
        if len(good) == 0:
            return EmbeddingResult(
                False, None, structure.color, "dense-embed",
                {"vertex": x, "block": cx, "candidates": int(cand[x].sum()),
                 "unused_candidates": len(pool), "pending_neighbours": later},
                stats={"embedded": x},
            )
        y = int(good[0])
        image[x] = y
        used[cx][y] = True
        for w in later:
            cand[w] &= structure.block(cx, classes[w])[y]
            hits[w] += 1
            worst = min(worst, cand[w].sum() / (frac ** hits[w] * structure.part_size(classes[w])))
    mapping = tuple(int(structure.parts[classes[u]][image[u]]) for u in range(h.n))
    return EmbeddingResult(True, mapping, structure.color, stats={"min_threshold_ratio": float(worst)})


# sparse ----------------------------------------------------------------------


def epsilon_ladder(eps: float, steps: int, growth: float = 2.0) -> list[float]:
    """Non-decreasing tolerances ``min(eps * growth**j, 1)``."""
    return [min(eps * growth**j, 1.0) for j in range(steps + 1)]


@dataclass
class _SparseState:
    h: Graph
    structure: BlockStructure
    locate: list[int]
    cand: list[np.ndarray]
    image: list[int]
    embedded: list[bool]


def _recompute(state: _SparseState, z: int) -> np.ndarray:
    """Candidate set of ``z`` from scratch, via host vertex ids."""
    st = state.structure
    target = st.parts[state.locate[z]]
    out = np.ones(len(target), dtype=bool)
    for x in state.h.neighbors(z):
        if not state.embedded[x]:
            continue
        row = st.block(state.locate[x], state.locate[z])[state.image[x]]
        out &= row
    return out


def sparse_embed(
    h: Graph,
    structure: BlockStructure,
    prep: HPreparation,
    locate,
    rho: float,
    p: float,
    eps: float,
    mu: float,
    ladder_growth: float = 2.0,
    check_mode: str = "sampled",
    restarts: int = 1,
    seed: int = 0,
    recompute_limit: int | None = DEFAULT_RECOMPUTE_LIMIT,
) -> EmbeddingResult:
    """Embed ``h`` class by class into ``structure``.

    ``locate[u]`` is the structure block receiving ``u``. For each class the
    candidates of every member are filtered by the degree condition into
    each later neighbour's candidate set (at least ``(rho p / 2)^d m`` where
    ``d`` is that neighbour's next left degree) and by the density of the
    shrunken candidate pairs; a system of distinct representatives of the
    filtered sets then fixes the images. Every step logs candidate-set
    monotonicity, the size lower bound and, if the structure has at most
    ``recompute_limit`` vertices (``None`` = always), a from-scratch
    recomputation of all candidate sets.
    """
    if h.n != len(locate):
        raise InputError("locate must cover every vertex")
    t = structure.target
    for u, v in h.sorted_edges():
        a, b = locate[u], locate[v]
        if a == b or not t.has_edge(a, b):
            raise InputError(f"edge ({u}, {v}) joins blocks {a}, {b} that are not adjacent")
    ladder = epsilon_ladder(eps, 2 * max(prep.max_degree, 1), ladder_growth)
    rng = np.random.default_rng(seed)
    size = [structure.part_size(locate[u]) for u in range(h.n)]
    state = _SparseState(
        h, structure, list(locate),
        [np.ones(size[u], dtype=bool) for u in range(h.n)],
        [-1] * h.n, [False] * h.n,
    )
    deg_in = [0] * h.n
    base = rho * p / 2
    total = sum(len(part) for part in structure.parts)
    recompute = recompute_limit is None or total <= recompute_limit
    log: list[dict] = []
    checks = 0
    classes = [c for c in prep.classes() if c]
    for members in classes:
        g_now = prep.g[members[0]]
        filtered: list[list[int]] = []
        for y in members:
            pool = np.flatnonzero(state.cand[y])
            right = sorted(z for z in h.neighbors(y) if prep.g[z] > g_now)
            keep = np.ones(len(pool), dtype=bool)
            reasons: dict[int, dict] = {}
            for z in right:
                need = base ** (deg_in[z] + 1) * size[z]
                rows = structure.block(locate[y], locate[z])[pool]
                deg = (rows & state.cand[z]).sum(axis=1)
                bad = deg < need - 1e-9
                for i in np.flatnonzero(bad & keep):
                    reasons[int(pool[i])] = {
                        "condition": "degree", "neighbour": z,
                        "blocks": [locate[y], locate[z]], "degree": int(deg[i]), "required": need,
                    }
                keep &= ~bad
            pairs = sorted({
                (min(z, w), max(z, w)) for z in right for w in h.neighbors(z) if prep.g[w] > g_now
            })
            for idx in np.flatnonzero(keep):
                v = int(pool[idx])
                for z, w in pairs:
                    j = deg_in[z] + (z in right) + deg_in[w] + (w in right)
                    e = ladder[min(j, len(ladder) - 1)]
                    if (rho - e) * p <= 1e-9:
                        continue
                    cz = state.cand[z].copy()
                    cw = state.cand[w].copy()
                    if z in right:
                        cz &= structure.block(locate[y], locate[z])[v]
                    if w in right:
                        cw &= structure.block(locate[y], locate[w])[v]
                    M = structure.block(locate[z], locate[w])[np.ix_(cz, cw)]
                    checks += 1
                    cert = check_dense_matrix(M, e, rho, p, check_mode, int(rng.integers(2**31)), restarts)
                    if not cert.passed:
                        keep[idx] = False
                        reasons[v] = {
                            "condition": "density", "pair": [z, w],
                            "blocks": [locate[z], locate[w]], "epsilon": e,
                            "witness_density": cert.witness_density,
                        }
                        break
            chosen = [int(v) for v in pool[keep]]
            filtered.append(chosen)
            if not chosen:
                return _fail(
                    "filter", log, state, checks,
                    {"class": g_now, "vertex": y, "candidates_before": len(pool),
                     "rejections": [
                         dict(candidate=int(structure.parts[locate[y]][v]), **r)
                         for v, r in sorted(reasons.items())
                     ]},
                )
        ratio_ok = all(
            len(f) >= (1 - prep.max_degree * ladder[-1] - prep.max_degree**2 * mu) * state.cand[y].sum() - 1e-9
            for y, f in zip(members, filtered)
        )
        hall = hall_matching(filtered)
        if not hall.saturated:
            deficient = list(hall.deficient)
            union = sorted(set().union(*(filtered[i] for i in deficient)))
            return _fail(
                "hall", log, state, checks,
                {"class": g_now, "members": [members[i] for i in deficient],
                 "sets": [filtered[i] for i in deficient], "union_size": len(union)},
            )
        before = {z: state.cand[z].copy() for z in range(h.n) if not state.embedded[z]}
        for y, rep in zip(members, hall.representatives):
            state.image[y] = rep
            state.embedded[y] = True
        for y in members:
            for z in h.neighbors(y):
                if prep.g[z] > g_now:
                    state.cand[z] &= structure.block(locate[y], locate[z])[state.image[y]]
                    deg_in[z] += 1
        monotone = all(
            not np.any(state.cand[z] & ~old) for z, old in before.items() if not state.embedded[z]
        )
        sizes = {z: int(state.cand[z].sum()) for z in before if not state.embedded[z]}
        bound_ok = all(sizes[z] >= base ** deg_in[z] * size[z] - 1e-9 for z in sizes)
        formula_ok = None
        if recompute:
            formula_ok = all(np.array_equal(_recompute(state, z), state.cand[z]) for z in sizes)
        log.append({
            "class": g_now,
            "members": len(members),
            "left_degree": prep.left_degree[members[0]],
            "min_filtered": min(len(f) for f in filtered),
            "min_candidates": min(sizes.values()) if sizes else None,
            "monotone": monotone,
            "bound_ok": bound_ok,
            "formula_ok": formula_ok,
            "filter_ratio_ok": ratio_ok,
        })
    mapping = tuple(int(structure.parts[locate[u]][state.image[u]]) for u in range(h.n))
    return EmbeddingResult(
        True, mapping, structure.color, log=log,
        stats={"classes": len(classes), "density_checks": checks},
    )


def _fail(stage: str, log: list[dict], state: _SparseState, checks: int, witness: dict) -> EmbeddingResult:
    st = state.structure
    witness = dict(witness)
    witness["target_blocks"] = st.target.n
    # store candidate sets of the failing vertex's neighbours as host ids for re-checking
    if stage == "filter":
        y = witness["vertex"]
        witness["neighbour_candidates"] = {
            str(z): [int(st.parts[state.locate[z]][i]) for i in np.flatnonzero(state.cand[z])]
            for z in sorted(state.h.neighbors(y)) if not state.embedded[z]
        }
        witness["vertex_candidates"] = [
            int(st.parts[state.locate[y]][i]) for i in np.flatnonzero(state.cand[y])
        ]
    return EmbeddingResult(
        False, None, st.color, stage, witness, log,
        {"embedded": sum(state.embedded), "density_checks": checks},
    )


def check_failure_witness(result: EmbeddingResult, structure: BlockStructure) -> bool:
    """Independently confirm that a failed run's witness shows a real obstruction.

    Hall witnesses must have a union smaller than their size. Filter
    witnesses must reject every candidate, and degree rejections must
    reproduce from the recorded neighbour candidate sets.
    """
    w = result.witness
    if result.success or w is None:
        return False
    if result.stage == "hall":
        union = set().union(*map(set, w["sets"]))
        return len(union) < len(w["sets"])
    if result.stage != "filter":
        return False
    where = {}
    for b, part in enumerate(structure.parts):
        for i, v in enumerate(part):
            where[int(v)] = (b, i)
    rejected = {r["candidate"]: r for r in w["rejections"]}
    if set(rejected) != set(w["vertex_candidates"]):
        return False
    for v, r in rejected.items():
        if r["condition"] != "degree":
            continue
        b_y, i_y = where[v]
        deg = 0
        for u in w["neighbour_candidates"][str(r["neighbour"])]:
            b_z, i_z = where[u]
            if [b_y, b_z] != r["blocks"]:
                return False
            deg += bool(structure.block(b_y, b_z)[i_y, i_z])
        if deg != r["degree"] or deg >= r["required"] - 1e-9:
            return False
    return True
