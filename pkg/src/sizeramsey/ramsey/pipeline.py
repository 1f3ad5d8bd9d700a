"""End-to-end Ramsey trials: host, coloring, structure search, embedding, verification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..graph import Graph, ProductEmbedding, complete_graph, strong_product
from .embed import (
    EmbeddingResult,
    dense_classes,
    dense_embed,
    dense_target,
    sparse_embed,
    verify_host_embedding,
)
from .host import build_blowup_host, color_host, host_summary
from .prepare import class_bound, prepare_H
from .structure import find_monochromatic_dense_structure, structure_from_host


@dataclass
class TrialOutcome:
    success: bool
    stage: str | None
    host: dict
    structure: dict | None = None
    embedding: EmbeddingResult | None = None
    verification: dict | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self, with_mapping: bool = True) -> dict:
        emb = None
        if self.embedding is not None:
            emb = self.embedding.to_json()
            if not with_mapping:
                emb.pop("mapping")
        return {
            "success": self.success,
            "failure_stage": self.stage,
            "host": self.host,
            "structure": self.structure,
            "embedding": emb,
            "verification": self.verification,
            "diagnostics": self.diagnostics,
        }


def run_dense_trial(
    h: Graph,
    witness: ProductEmbedding,
    max_degree: int,
    k: int,
    m: int,
    lam: float,
    eps: float,
    alpha: float,
    seed: int,
    strategy: str = "random",
    restarts: int = 4,
    occupied_only: bool = False,
):
    """One dense-pipeline trial; returns ``(outcome, host)``.

    The host is the complete-part blow-up of ``tree ⊠ K_{Δ+1}`` with parts
    of size ``m``. With ``occupied_only`` the structure search only covers
    the blocks that actually receive vertices of ``h``.
    """
    target = dense_target(witness.tree, max_degree)
    classes = dense_classes(h, witness.node, max_degree)
    host = build_blowup_host(target, m, 1.0, seed, complete_parts=True)
    color_host(host, k, strategy, seed + 1)
    summary = host_summary(host)
    if occupied_only:
        used = sorted(set(classes))
        sub, _ = target.induced(used)
        index = {c: i for i, c in enumerate(used)}
        prefer = used
    else:
        sub, index, prefer = target, {c: c for c in range(target.n)}, None
    found = find_monochromatic_dense_structure(
        host, sub, eps, alpha, lam, seed=seed + 2, restarts=restarts, prefer=prefer
    )
    if not found.success:
        return TrialOutcome(False, "structure", summary, diagnostics=found.diagnostics), host
    st = found.structure
    result = dense_embed(h, st, [index[c] for c in classes], k)
    if not result.success:
        return TrialOutcome(False, result.stage, summary, st.summary(), result), host
    report = verify_host_embedding(h, host, result.mapping, result.color)
    return TrialOutcome(report["pass"], None if report["pass"] else "verify", summary,
                        st.summary(), result, report), host


def run_sparse_trial(
    h: Graph,
    base: Graph,
    node,
    slot,
    size: int,
    max_degree: int,
    k: int,
    p: float,
    m: int,
    rho: float,
    eps: float,
    mu: float,
    lam: float,
    seed: int,
    strategy: str = "random",
    restarts: int = 4,
    ladder_growth: float = 2.0,
    recompute_limit: int | None = 200,
    certify_structure: bool = True,
):
    """One sparse-pipeline trial; returns ``(outcome, host, structure)``.

    The host blows up the occupied part of ``base ⊠ K_classes`` with
    independent parts of ``ceil(m / lam)`` vertices and cross density ``p``;
    the structure blocks have ``ceil(lam * part) >= m`` vertices. Without
    ``certify_structure`` the structure is the whole host restricted to its
    plurality color, taken without density checks.
    """
    prep = prepare_H(h, base, node, slot, size, max_degree)
    per = class_bound(max_degree)
    occupied = sorted({prep.target_vertex(u) for u in range(h.n)})
    full = strong_product(base, complete_graph(per))
    target, _ = full.induced(occupied)
    index = {c: i for i, c in enumerate(occupied)}
    part = math.ceil(m / lam - 1e-9)
    host = build_blowup_host(target, part, p, seed, complete_parts=False)
    color_host(host, k, strategy, seed + 1)
    summary = host_summary(host)
    summary["occupied_blocks"] = occupied
    if certify_structure:
        found = find_monochromatic_dense_structure(
            host, target, eps, rho, lam, seed=seed + 2, restarts=restarts
        )
        if not found.success:
            return TrialOutcome(False, "structure", summary, diagnostics=found.diagnostics), host, None
        st = found.structure
    else:
        counts = host.color_counts()
        st = structure_from_host(host, min(range(k), key=lambda c: (-counts[c], c)))
    locate = [index[prep.target_vertex(u)] for u in range(h.n)]
    result = sparse_embed(
        h, st, prep, locate, rho, p, eps, mu, ladder_growth,
        seed=seed + 3, recompute_limit=recompute_limit,
    )
    if not result.success:
        return TrialOutcome(False, result.stage, summary, st.summary(), result), host, st
    report = verify_host_embedding(h, host, result.mapping, result.color)
    return (
        TrialOutcome(report["pass"], None if report["pass"] else "verify", summary,
                     st.summary(), result, report),
        host,
        st,
    )
