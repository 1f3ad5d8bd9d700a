"""Systems of distinct representatives via Hopcroft-Karp matching."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class HallResult:
    """Either a full system of representatives or a Hall-violating subfamily.

    ``representatives[i]`` is the element chosen for set ``i`` (or ``None``
    when the matching is not saturating). ``deficient`` lists set indices
    whose union is smaller than their number.
    """

    representatives: tuple | None
    deficient: tuple[int, ...] | None
    matching_size: int

    @property
    def saturated(self) -> bool:
        return self.representatives is not None


def hall_matching(sets: Sequence[Sequence[Hashable]]) -> HallResult:
    """Maximum matching of sets to elements (lowest-index tie-breaking).

    When no full SDR exists, the witness is the set of family members
    reachable from an unmatched member by alternating paths; their union is
    exactly the elements matched to the other reachable members.
    """
    elems = sorted({e for s in sets for e in s}, key=lambda e: (str(type(e)), e))
    eid = {e: i for i, e in enumerate(elems)}
    adj = [sorted({eid[e] for e in s}) for s in sets]
    n, m = len(sets), len(elems)
    match_l = [-1] * n
    match_r = [-1] * m
    INF = n + 1

    def bfs() -> tuple[bool, list[int]]:
        dist = [INF] * n
        q = deque()
        for u in range(n):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for e in adj[u]:
                w = match_r[e]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found, dist

    def dfs(u: int, dist: list[int]) -> bool:
        for e in adj[u]:
            w = match_r[e]
            if w < 0 or (dist[w] == dist[u] + 1 and dfs(w, dist)):
                match_l[u], match_r[e] = e, u
                return True
        dist[u] = INF
        return False

    size = 0
    while True:
        found, dist = bfs()
        if not found:
            break
        for u in range(n):
            if match_l[u] < 0 and dfs(u, dist):
                size += 1
    if size == n:
        return HallResult(tuple(elems[match_l[u]] for u in range(n)), None, size)
    start = min(u for u in range(n) if match_l[u] < 0)
    seen = {start}
    q = deque([start])
    while q:
        u = q.popleft()
        for e in adj[u]:
            w = match_r[e]
            if w >= 0 and w not in seen:
                seen.add(w)
                q.append(w)
    return HallResult(None, tuple(sorted(seen)), size)


def is_hall_witness(sets: Sequence[Sequence[Hashable]], members: Sequence[int]) -> bool:
    union = set()
    for i in members:
        union |= set(sets[i])
    return len(union) < len(set(members))
