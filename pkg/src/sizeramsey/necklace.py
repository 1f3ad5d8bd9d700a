"""Necklace splitting for partially colored sequences.

Positions are 1-based. A cut at ``p`` separates position ``p`` from
``p + 1``. A split with ``c`` cuts has ``c + 1`` intervals, each assigned to
side X (0) or side Y (1), and is valid when every color ``i`` satisfies
``max(|X ∩ c⁻¹(i)|, |Y ∩ c⁻¹(i)|) <= ceil(|c⁻¹(i)| / 2)``.

The search is iterative deepening on the number of cuts. Two observations
keep it small:

* uncolored positions never matter, so only cuts directly after a colored
  position are tried;
* in a split with the fewest cuts, neighbouring intervals lie on opposite
  sides (otherwise merge them), so sides alternate starting with X.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetError, InputError

DEFAULT_BUDGET_SECS = 10.0


@dataclass(frozen=True)
class NecklaceSplit:
    n: int
    cut_positions: tuple[int, ...]
    sides: tuple[int, ...]

    @property
    def intervals(self) -> list[tuple[int, int]]:
        """Inclusive 1-based ``(start, end)`` pairs."""
        bounds = [0, *self.cut_positions, self.n]
        return [(bounds[i] + 1, bounds[i + 1]) for i in range(len(bounds) - 1)]

    @property
    def r(self) -> int:
        """Number of intervals on side X."""
        return sum(1 for s in self.sides if s == 0)

    def side_of(self) -> list[int]:
        """Side (0 for X, 1 for Y) of every position, as a 0-based list."""
        out = []
        for (a, b), side in zip(self.intervals, self.sides):
            out += [side] * (b - a + 1)
        return out

    def to_json(self) -> dict:
        side = self.side_of()
        return {
            "n": self.n,
            "cut_positions": list(self.cut_positions),
            "sides": list(self.sides),
            "r": self.r,
            "X": [i + 1 for i, s in enumerate(side) if s == 0],
            "Y": [i + 1 for i, s in enumerate(side) if s == 1],
        }


def split_violations(colors: Sequence[int | None], k: int, split: NecklaceSplit) -> list[str]:
    """Independent check of a split against the interval and balance rules."""
    out = []
    n = len(colors)
    cuts = split.cut_positions
    if split.n != n:
        out.append(f"split covers {split.n} positions, necklace has {n}")
    if len(cuts) > k:
        out.append(f"{len(cuts)} cuts exceed k={k}")
    if any(not 1 <= c < n for c in cuts) or list(cuts) != sorted(set(cuts)):
        out.append(f"cuts {list(cuts)} are not increasing inside [1, {n})")
    if len(split.sides) != len(cuts) + 1 or any(s not in (0, 1) for s in split.sides):
        out.append("sides must label every interval with 0 or 1")
    if out:
        return out
    side = split.side_of()
    totals = [0] * k
    counts = [[0] * k, [0] * k]
    for pos, c in enumerate(colors):
        if c is None:
            continue
        totals[c] += 1
        counts[side[pos]][c] += 1
    for c in range(k):
        bound = (totals[c] + 1) // 2
        if max(counts[0][c], counts[1][c]) > bound:
            out.append(
                f"color {c}: sides hold {counts[0][c]} and {counts[1][c]}, bound {bound}"
            )
    return out


def necklace_split(
    colors: Sequence[int | None],
    k: int,
    budget_secs: float = DEFAULT_BUDGET_SECS,
) -> NecklaceSplit:
    """Split with the fewest cuts (at most ``k``) satisfying the balance rule.

    ``colors[i]`` is the color of position ``i + 1`` or ``None``.
    Raises :class:`BudgetError` if the time budget runs out first.
    """
    if k < 1:
        raise InputError("k must be positive")
    n = len(colors)
    for c in colors:
        if c is not None and not 0 <= c < k:
            raise InputError(f"color {c} outside [0, {k})")
    beads = [i + 1 for i, c in enumerate(colors) if c is not None]
    nb = len(beads)
    onehot = np.zeros((nb, k), dtype=np.int64)
    for j, pos in enumerate(beads):
        onehot[j, colors[pos - 1]] = 1
    pre = np.zeros((nb + 1, k), dtype=np.int64)
    np.cumsum(onehot, axis=0, out=pre[1:])
    total = pre[nb]
    bound = (total + 1) // 2
    deadline = time.monotonic() + budget_secs
    ticks = 0

    def tick() -> None:
        nonlocal ticks
        ticks += 1
        if ticks % 256 == 1 and time.monotonic() > deadline:
            raise BudgetError(f"necklace search exceeded {budget_secs}s")

    def search(start: int, side: int, left: int, cnt: list[np.ndarray]) -> list[int] | None:
        tick()
        other = 1 - side
        if left == 0:
            if np.all(cnt[side] + total - pre[start] <= bound):
                return []
            return None
        last = nb - 1 - left  # later intervals need one bead each
        if last < start:
            return None
        if left == 1:
            ends = np.arange(start, last + 1)
            here = cnt[side] + pre[ends + 1] - pre[start]
            there = cnt[other] + total - pre[ends + 1]
            ok = np.all(here <= bound, axis=1) & np.all(there <= bound, axis=1)
            hits = np.flatnonzero(ok)
            return [int(ends[hits[0]])] if hits.size else None
        for end in range(start, last + 1):
            here = cnt[side] + pre[end + 1] - pre[start]
            if np.any(here > bound):
                break
            nxt = [None, None]
            nxt[side] = here
            nxt[other] = cnt[other]
            rest = search(end + 1, other, left - 1, nxt)
            if rest is not None:
                return [end] + rest
        return None

    zero = np.zeros(k, dtype=np.int64)
    for cuts in range(0, k + 1):
        if nb == 0 and cuts > 0:
            break
        found = search(0, 0, cuts, [zero, zero]) if nb else []
        if found is not None:
            positions = tuple(beads[j] for j in found)
            sides = tuple(i % 2 for i in range(len(positions) + 1))
            return NecklaceSplit(n, positions, sides)
    # unreachable: k cuts always suffice for k colors; kept as a loud failure
    raise BudgetError("no split with at most k cuts was found")


def parse_color_string(text: str, k: int | None = None) -> tuple[list[int | None], int]:
    """Map a one-line necklace such as ``"RB.RB"`` to color indices.

    Symbols get indices in order of first appearance; ``.``, ``-`` and ``_``
    mark uncolored positions.
    """
    symbols: dict[str, int] = {}
    colors: list[int | None] = []
    for ch in text.strip():
        if ch in ".-_":
            colors.append(None)
            continue
        if ch.isspace():
            continue
        if ch not in symbols:
            symbols[ch] = len(symbols)
        colors.append(symbols[ch])
    used = max(len(symbols), 1)
    if k is None:
        k = used
    elif k < len(symbols):
        raise InputError(f"necklace uses {len(symbols)} colors but k={k}")
    return colors, k
