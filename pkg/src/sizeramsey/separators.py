"""Balanced separators, separator-respecting orderings and colored separators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CertificateError, InputError
from .graph import Graph
from .necklace import DEFAULT_BUDGET_SECS, necklace_split
from .treedecomp import EXACT_LIMIT, TreeDecomposition, tree_decomposition


@dataclass(frozen=True)
class TreewidthProfile:
    """Monotone upper bound ``t(x)`` on the treewidth of ``x``-vertex subgraphs.

    ``kind`` selects the formula:

    * ``"const"``: ``t(x) = c``
    * ``"sqrt"``: ``t(x) = ceil(c * sqrt(x)) + b`` (``b = 0`` by default)
    * ``"log"``: ``t(x) = c * log(max(x, 1))``
    * ``"power"``: ``t(x) = c * x**b`` with ``0 < b <= 1``; no rounding, so
      the scaling exponent ``alpha = b`` holds exactly

    ``alpha`` is the scaling exponent ``t(lx) <= l**alpha * t(x)`` when known.
    """

    kind: str
    c: float
    b: float = 0.0
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("const", "sqrt", "log", "power"):
            raise InputError(f"unknown profile kind {self.kind!r}")
        if self.c < 0 or self.b < 0:
            raise InputError("profile coefficients must be non-negative")
        if self.alpha is not None and not 0 < self.alpha <= 1:
            raise InputError("alpha must lie in (0, 1]")
        if self.kind == "power" and not 0 < self.b <= 1:
            raise InputError("power profile exponent must lie in (0, 1]")

    @classmethod
    def constant(cls, c: float) -> "TreewidthProfile":
        return cls("const", c)

    @classmethod
    def sqrt(cls, c: float = 1.0, b: float = 0.0) -> "TreewidthProfile":
        # the pure form c*sqrt(x) scales with exponent 1/2; ceilings and
        # offsets break that inequality for small x, so alpha is dropped
        return cls("sqrt", c, b, None)

    @classmethod
    def log(cls, c: float = 1.0) -> "TreewidthProfile":
        return cls("log", c)

    @classmethod
    def power(cls, c: float, exponent: float) -> "TreewidthProfile":
        return cls("power", c, exponent, exponent)

    @classmethod
    def parse(cls, text: str) -> "TreewidthProfile":
        """Parse ``const:C``, ``sqrt:C`` / ``sqrt:C,B``, ``log:C`` or ``power:C,A``."""
        kind, _, rest = text.partition(":")
        try:
            nums = [float(x) for x in rest.split(",")] if rest else []
        except ValueError:
            raise InputError(f"bad profile {text!r}") from None
        if kind == "const" and len(nums) == 1:
            return cls.constant(nums[0])
        if kind == "sqrt" and 1 <= len(nums) <= 2:
            return cls.sqrt(*nums)
        if kind == "log" and len(nums) == 1:
            return cls.log(nums[0])
        if kind == "power" and len(nums) == 2:
            return cls.power(*nums)
        raise InputError(f"bad profile {text!r}; use const:C, sqrt:C[,B], log:C or power:C,A")

    def t(self, x: float) -> float:
        if self.kind == "const":
            return self.c
        if self.kind == "sqrt":
            return math.ceil(self.c * math.sqrt(max(x, 0.0)) - 1e-12) + self.b
        if self.kind == "power":
            return self.c * max(x, 0.0) ** self.b
        return self.c * math.log(max(x, 1.0))

    def __call__(self, x: float) -> float:
        return self.t(x)

    def label(self) -> str:
        def fmt(v: float) -> str:
            return str(int(v)) if float(v).is_integer() else repr(v)

        if self.kind == "sqrt" and self.b or self.kind == "power":
            return f"{self.kind}:{fmt(self.c)},{fmt(self.b)}"
        return f"{self.kind}:{fmt(self.c)}"


def log_levels(n: int) -> int:
    """``ceil(log_{3/2} n)`` for ``n >= 1``, computed exactly with integers."""
    if n < 1:
        raise InputError("n must be positive")
    levels = 0
    while 3**levels < n * 2**levels:
        levels += 1
    return levels


def ordering_bound(n: int, profile: TreewidthProfile) -> float:
    """Upper bound on every ``|S(v)|`` of a separator ordering of ``n`` vertices."""
    if n == 0:
        return 0.0
    return sum(profile.t((2 / 3) ** j * n) + 1 for j in range(log_levels(n) + 1))


@dataclass(frozen=True)
class SeparatorTriple:
    S: frozenset[int]
    A: frozenset[int]
    B: frozenset[int]

    def violations(self, g: Graph) -> list[str]:
        out = []
        if self.S & self.A or self.S & self.B or self.A & self.B:
            out.append("S, A and B are not pairwise disjoint")
        if self.S | self.A | self.B != set(range(g.n)):
            out.append("S, A and B do not cover the vertex set")
        for u, v in g.sorted_edges():
            if (u in self.A and v in self.B) or (u in self.B and v in self.A):
                out.append(f"edge ({u}, {v}) joins A and B")
        return out

    def to_json(self, bound: float | None = None) -> dict:
        out = {
            "S": sorted(self.S),
            "A": sorted(self.A),
            "B": sorted(self.B),
            "measured": len(self.S),
        }
        if bound is not None:
            out["bound"] = bound
        return out


def balanced_separator(g: Graph, td: TreeDecomposition) -> SeparatorTriple:
    """Bag-based separator with both sides of size at most ``2n/3``.

    Walks the decomposition tree from bag 0 towards the component holding
    more than half of the vertices until a bag leaves only components of
    size ``<= n/2``; such a bag exists in every valid decomposition and the
    walk never turns back. Components are then grouped into two sides.
    """
    problems = td.violations(g)
    if problems:
        raise InputError("invalid tree decomposition: " + "; ".join(problems[:3]))
    n = g.n
    if n == 0:
        return SeparatorTriple(frozenset(), frozenset(), frozenset())
    holders: dict[int, int] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders.setdefault(v, i)
    node, seen = 0, set()
    while node not in seen:
        seen.add(node)
        bag = td.bags[node]
        rest = [v for v in range(n) if v not in bag]
        comps = g.components(rest)
        big = [c for c in comps if 2 * len(c) > n]
        if not big:
            a, b = _group(comps, len(rest))
            return SeparatorTriple(frozenset(bag), frozenset(a), frozenset(b))
        node = _step_towards(td.tree, node, holders[min(big[0])])
    raise CertificateError("no bag splits the graph into halves")


def _step_towards(tree: Graph, src: int, dst: int) -> int:
    parent = {src: src}
    queue = [src]
    for x in queue:
        for y in sorted(tree.neighbors(x)):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    while parent[dst] != src:
        dst = parent[dst]
    return dst


def _group(comps: list[list[int]], total: int) -> tuple[list[int], list[int]]:
    comps = sorted(comps, key=lambda c: (-len(c), min(c)))
    if not comps:
        return [], []
    if 3 * len(comps[0]) >= total:
        side = 1
    else:
        side, size = 0, 0
        while 3 * size < total:
            size += len(comps[side])
            side += 1
    a = [v for c in comps[:side] for v in c]
    b = [v for c in comps[side:] for v in c]
    return sorted(a), sorted(b)


@dataclass(frozen=True)
class SeparatorOrdering:
    order: tuple[int, ...]
    sets: tuple[frozenset[int], ...]
    bound: float

    def set_of(self) -> dict[int, frozenset[int]]:
        return dict(zip(self.order, self.sets))

    def violations(self, g: Graph) -> list[str]:
        """Full edge scan of the prefix/suffix separation property."""
        out = []
        n = g.n
        if sorted(self.order) != list(range(n)):
            return ["order is not a permutation of the vertices"]
        pos = {v: i for i, v in enumerate(self.order)}
        edges = [(min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges]
        for i, (v, s) in enumerate(zip(self.order, self.sets)):
            if v not in s:
                out.append(f"S({v}) misses {v}")
            if len(s) > self.bound + 1e-9:
                out.append(f"|S({v})| = {len(s)} exceeds bound {self.bound}")
            for a, b in edges:
                if a < i < b and self.order[a] not in s and self.order[b] not in s:
                    out.append(
                        f"edge ({self.order[a]}, {self.order[b]}) crosses position {i} outside S"
                    )
        return out

    def to_json(self) -> dict:
        return {
            "order": list(self.order),
            "sets": [sorted(s) for s in self.sets],
            "bound": self.bound,
            "measured": max((len(s) for s in self.sets), default=0),
        }


def _local_decomposition(
    h: Graph, td: TreeDecomposition | None, budget: float, exact_limit: int
) -> TreeDecomposition:
    best = td
    if best is None or best.width > budget:
        own = tree_decomposition(h, "heuristic")
        if best is None or own.width < best.width:
            best = own
    if best.width > budget and h.n <= exact_limit:
        best = tree_decomposition(h, "exact")
    return best


def separator_ordering(
    g: Graph,
    profile: TreewidthProfile,
    td: TreeDecomposition | None = None,
    exact_limit: int = EXACT_LIMIT,
) -> SeparatorOrdering:
    """Recursive ordering ``A-order, S, B-order`` with per-vertex separators.

    ``td`` is an optional decomposition of ``g``; it is restricted to every
    subproblem. Each subgraph uses the best of the restricted decomposition,
    its own min-fill decomposition and (when small enough) an exact one.
    Raises :class:`CertificateError` when a separator exceeds ``t(x) + 1``.
    """
    if td is not None and td.violations(g):
        raise InputError("decomposition does not belong to the graph")

    def solve(h: Graph, labels: list[int], htd: TreeDecomposition | None):
        x = h.n
        if x == 0:
            return [], {}
        if x == 1:
            return [labels[0]], {labels[0]: frozenset(labels)}
        budget = profile.t(x)
        dec = _local_decomposition(h, htd, budget, exact_limit)
        if dec.width > budget + 1e-9:
            raise CertificateError(
                f"separator budget t({x}) = {budget:g} exceeded on a subgraph of "
                f"{x} vertices (best width found {dec.width})"
            )
        trip = balanced_separator(h, dec)
        sep = frozenset(labels[v] for v in trip.S)
        order: list[int] = []
        sets: dict[int, frozenset[int]] = {}
        for part in (sorted(trip.A), None, sorted(trip.B)):
            if part is None:
                order += sorted(sep)
                sets.update((v, sep) for v in sep)
                continue
            sub, old = h.induced(part)
            sub_order, sub_sets = solve(sub, [labels[v] for v in old], dec.restrict(part))
            order += sub_order
            sets.update((v, s | sep) for v, s in sub_sets.items())
        return order, sets

    order, sets = solve(g, list(range(g.n)), td)
    result = SeparatorOrdering(tuple(order), tuple(sets[v] for v in order), ordering_bound(g.n, profile))
    too_big = [v for v, s in zip(result.order, result.sets) if len(s) > result.bound + 1e-9]
    if too_big:
        raise CertificateError(f"|S({too_big[0]})| exceeds the ordering bound {result.bound}")
    return result


def colored_separator_bound(n: int, k: int, profile: TreewidthProfile) -> float:
    return k + k * ordering_bound(n, profile)


def colored_separator(
    g: Graph,
    coloring: Sequence[int | None],
    k: int,
    profile: TreewidthProfile,
    td: TreeDecomposition | None = None,
    budget_secs: float = DEFAULT_BUDGET_SECS,
) -> SeparatorTriple:
    """Separator that also halves every color class.

    Orders the vertices, splits the induced necklace, and takes ``S`` to be
    the union of ``S(x)`` over the last position ``x`` of every interval
    followed by an interval of the other side. Finally, for every color
    whose larger side still exceeds half the class, one vertex of that
    color moves from the larger side into ``S``.
    """
    if len(coloring) != g.n:
        raise InputError("coloring must give one entry per vertex")
    if g.n == 0:
        return SeparatorTriple(frozenset(), frozenset(), frozenset())
    ordering = separator_ordering(g, profile, td)
    split = necklace_split([coloring[v] for v in ordering.order], k, budget_secs)
    sep: set[int] = set()
    sides = split.sides
    for j, (_, end) in enumerate(split.intervals[:-1]):
        if sides[j] != sides[j + 1]:
            sep |= ordering.sets[end - 1]
    side_of = split.side_of()
    a = {v for i, v in enumerate(ordering.order) if side_of[i] == 0} - sep
    b = {v for i, v in enumerate(ordering.order) if side_of[i] == 1} - sep
    for c in range(k):
        total = sum(1 for v in range(g.n) if coloring[v] == c)
        in_a = sorted(v for v in a if coloring[v] == c)
        in_b = sorted(v for v in b if coloring[v] == c)
        bigger = in_a if len(in_a) >= len(in_b) else in_b
        if 2 * len(bigger) > total:
            v = bigger[0]
            (a if v in a else b).discard(v)
            sep.add(v)
    result = SeparatorTriple(frozenset(sep), frozenset(a), frozenset(b))
    bound = colored_separator_bound(g.n, k, profile)
    if len(sep) > bound + 1e-9:
        raise CertificateError(f"colored separator of size {len(sep)} exceeds {bound}")
    problems = result.violations(g)
    if problems:
        raise CertificateError("colored separator failed its own check: " + problems[0])
    return result


def color_violations(
    trip: SeparatorTriple, coloring: Sequence[int | None], k: int
) -> list[str]:
    """Check that each side holds at most half of every color class."""
    out = []
    for c in range(k):
        total = sum(1 for x in coloring if x == c)
        for name, side in (("A", trip.A), ("B", trip.B)):
            cnt = sum(1 for v in side if coloring[v] == c)
            if 2 * cnt > total:
                out.append(f"color {c}: side {name} holds {cnt} of {total}")
    return out
