"""Density, uniformity, congestion and bad-family predicates.

All pair predicates work on a boolean biadjacency matrix ``M`` whose rows
are one side of the pair and whose columns are the other. Minimum and
maximum densities over subsets of size at least ``(a, b)`` are attained at
size exactly ``(a, b)``: the density of a larger pair is the average over
its ``(a, b)``-subpairs. Exhaustive mode therefore enumerates the row
subsets of size ``a`` and takes the ``b`` extreme column sums.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import InputError, SizeGuardError
from ..graph import Graph

EXACT_PART_LIMIT = 16
EXACT_CONGESTION_LIMIT = 14
AUTO_EXACT_SUBSETS = 20_000
TOL = 1e-9


def subset_size(fraction: float, total: int) -> int:
    """Smallest integer ``>= fraction * total`` (with a float tolerance)."""
    return max(0, math.ceil(fraction * total - TOL))


def density(M: np.ndarray, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> float:
    sub = M if rows is None else M[np.asarray(rows, dtype=np.intp)]
    if cols is not None:
        sub = sub[:, np.asarray(cols, dtype=np.intp)]
    if sub.size == 0:
        return 0.0
    return float(sub.sum()) / sub.size


@dataclass(frozen=True)
class DensityCertificate:
    """Outcome of a one- or two-sided density check.

    ``witness`` holds row and column indices (or vertex ids when produced
    through :class:`BipartitePair`) of a refuting subpair.
    """

    kind: str
    params: dict
    mode: str
    verdict: str
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    witness_density: float | None = None
    extreme_density: float | None = None
    samples: int = 0
    side: str | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "mode": self.mode,
            "verdict": self.verdict,
            "witness": None if self.witness is None else [list(self.witness[0]), list(self.witness[1])],
            "witness_density": self.witness_density,
            "extreme_density": self.extreme_density,
            "samples": self.samples,
            "side": self.side,
        }


# extreme densities ----------------------------------------------------------


def _pick_cols(sums: np.ndarray, b: int, lowest: bool) -> np.ndarray:
    order = np.argsort(sums if lowest else -sums, kind="stable")
    return np.sort(order[:b])


def extreme_subpair_exact(M: np.ndarray, a: int, b: int, lowest: bool = True):
    """Exact minimum (or maximum) edge count over ``a x b`` subpairs.

    Returns ``(count, rows, cols)``. Enumerates the smaller side.
    """
    nr, nc = M.shape
    if max(nr, nc) > EXACT_PART_LIMIT:
        raise SizeGuardError(f"exhaustive density check refused above {EXACT_PART_LIMIT} per side")
    if nr > nc:
        count, cols, rows = extreme_subpair_exact(M.T, b, a, lowest)
        return count, rows, cols
    Mi = M.astype(np.int64)
    best = None
    combos = np.array(list(itertools.combinations(range(nr), a)), dtype=np.intp).reshape(-1, a)
    for start in range(0, len(combos), 4096):
        chunk = combos[start:start + 4096]
        ind = np.zeros((len(chunk), nr), dtype=np.int64)
        np.put_along_axis(ind, chunk, 1, axis=1)
        sums = ind @ Mi
        part = np.sort(sums, axis=1)
        vals = part[:, :b].sum(axis=1) if lowest else part[:, nc - b:].sum(axis=1)
        i = int(np.argmin(vals) if lowest else np.argmax(vals))
        v = int(vals[i])
        if best is None or (v < best[0] if lowest else v > best[0]):
            best = (v, chunk[i], sums[i])
    v, rows, sums = best
    return v, tuple(int(r) for r in rows), tuple(int(c) for c in _pick_cols(sums, b, lowest))


def _alternate(M: np.ndarray, rows: np.ndarray, a: int, b: int, lowest: bool):
    """Alternate best-columns / best-rows until the count stops improving."""
    Mi = M.astype(np.int64)
    best = None
    for _ in range(50):
        cols = _pick_cols(Mi[rows].sum(axis=0), b, lowest)
        rows = _pick_cols(Mi[:, cols].sum(axis=1), a, lowest)
        v = int(Mi[np.ix_(rows, cols)].sum())
        if best is not None and (v >= best[0] if lowest else v <= best[0]):
            break
        best = (v, rows, cols)
    return best


def _greedy_shrink(M: np.ndarray, a: int, b: int, lowest: bool, rows=None, cols=None, batch: int = 3):
    """Peel rows/columns whose removal moves the density furthest.

    While far from the target size, the ``1/batch`` share of the excess
    with the most extreme sums is removed in one step; near the target
    this degrades to one line at a time.
    """
    Mi = M.astype(np.int64)
    rows = np.arange(M.shape[0]) if rows is None else np.asarray(rows)
    cols = np.arange(M.shape[1]) if cols is None else np.asarray(cols)
    row_alive = np.zeros(M.shape[0], dtype=bool)
    col_alive = np.zeros(M.shape[1], dtype=bool)
    row_alive[rows] = True
    col_alive[cols] = True
    sub = Mi * row_alive[:, None] * col_alive[None, :]
    rs, cs = sub.sum(axis=1), sub.sum(axis=0)
    total = int(rs.sum())
    nr, nc = len(rows), len(cols)
    sign = -1 if lowest else 1
    big = np.iinfo(np.int64).max
    while nr > a or nc > b:
        cand = []
        if nr > a:
            cnt = max(1, (nr - a) // batch)
            key = np.where(row_alive, sign * rs, big)
            idx = np.argsort(key, kind="stable")[:cnt]
            cand.append(((total - int(rs[idx].sum())) / ((nr - cnt) * nc), 0, idx))
        if nc > b:
            cnt = max(1, (nc - b) // batch)
            key = np.where(col_alive, sign * cs, big)
            idx = np.argsort(key, kind="stable")[:cnt]
            cand.append(((total - int(cs[idx].sum())) / (nr * (nc - cnt)), 1, idx))
        cand.sort(key=lambda t: (t[0] if lowest else -t[0], t[1]))
        _, axis, idx = cand[0]
        if axis == 0:
            row_alive[idx] = False
            total -= int(rs[idx].sum())
            cs -= Mi[idx].sum(axis=0) * col_alive
            nr -= len(idx)
        else:
            col_alive[idx] = False
            total -= int(cs[idx].sum())
            rs -= Mi[:, idx].sum(axis=1) * row_alive
            nc -= len(idx)
    return _alternate(M, np.flatnonzero(row_alive), a, b, lowest)


def extreme_subpair_sampled(
    M: np.ndarray, a: int, b: int, lowest: bool, rng: np.random.Generator, restarts: int
):
    """Heuristic extreme ``a x b`` subpair: greedy peeling plus random restarts."""
    nr, nc = M.shape
    best = _greedy_shrink(M, a, b, lowest)
    for start in (_greedy_shrink(M, a, b, lowest, batch=8),):
        if start[0] < best[0] if lowest else start[0] > best[0]:
            best = start
    for _ in range(restarts):
        if rng.random() < 0.5:
            rows = np.sort(rng.choice(nr, size=a, replace=False))
            cand = _alternate(M, rows, a, b, lowest)
        else:
            kr = int(rng.integers(a, nr + 1))
            kc = int(rng.integers(b, nc + 1))
            rows = np.sort(rng.choice(nr, size=kr, replace=False))
            cols = np.sort(rng.choice(nc, size=kc, replace=False))
            cand = _greedy_shrink(M, a, b, lowest, rows, cols)
        if cand[0] < best[0] if lowest else cand[0] > best[0]:
            best = cand
    v, rows, cols = best
    return v, tuple(int(r) for r in rows), tuple(int(c) for c in cols)


def _resolve_mode(mode: str, M: np.ndarray, a: int, b: int) -> str:
    if mode in ("exhaustive", "sampled"):
        return mode
    if mode != "auto":
        raise InputError(f"unknown mode {mode!r}")
    nr, nc = M.shape
    small, k = (nr, a) if nr <= nc else (nc, b)
    if max(nr, nc) <= EXACT_PART_LIMIT and math.comb(small, k) <= AUTO_EXACT_SUBSETS:
        return "exhaustive"
    return "sampled"


def _extreme(M, a, b, lowest, mode, seed, restarts):
    if mode == "exhaustive":
        return extreme_subpair_exact(M, a, b, lowest)
    rng = np.random.default_rng(seed)
    return extreme_subpair_sampled(M, a, b, lowest, rng, restarts)


def _check_params(**vals: float) -> None:
    for name, v in vals.items():
        if not 0 < v <= 1:
            raise InputError(f"{name} must lie in (0, 1], got {v}")


def check_dense_matrix(
    M: np.ndarray,
    eps: float,
    alpha: float,
    p: float,
    mode: str = "auto",
    seed: int = 0,
    restarts: int = 16,
) -> DensityCertificate:
    """Is every subpair with sides ``>= eps`` of each side of density ``>= (alpha - eps) p``?"""
    _check_params(eps=eps, alpha=alpha, p=p)
    M = np.asarray(M, dtype=bool)
    params = {"epsilon": eps, "alpha": alpha, "p": p}
    nr, nc = M.shape
    if nr == 0 or nc == 0 or (alpha - eps) * p <= TOL:
        # vacuous: densities are never negative
        return DensityCertificate("dense", params, "exhaustive", "pass")
    a, b = max(1, subset_size(eps, nr)), max(1, subset_size(eps, nc))
    mode = _resolve_mode(mode, M, a, b)
    count, rows, cols = _extreme(M, a, b, True, mode, seed, restarts)
    d = count / (a * b)
    threshold = (alpha - eps) * p
    samples = 0 if mode == "exhaustive" else restarts + 1
    if d < threshold - TOL:
        return DensityCertificate("dense", params, mode, "refuted", (rows, cols), d, d, samples, "low")
    return DensityCertificate("dense", params, mode, "pass", None, None, d, samples)


def check_uniform_matrix(
    M: np.ndarray,
    lam: float,
    p: float,
    mode: str = "auto",
    seed: int = 0,
    restarts: int = 16,
) -> DensityCertificate:
    """Do all subpairs with sides ``>= lam`` of each side have density in ``[(1-lam)p, (1+lam)p]``?"""
    _check_params(lam=lam, p=p)
    M = np.asarray(M, dtype=bool)
    params = {"lambda": lam, "p": p}
    nr, nc = M.shape
    if nr == 0 or nc == 0:
        return DensityCertificate("uniform", params, "exhaustive", "pass")
    a, b = max(1, subset_size(lam, nr)), max(1, subset_size(lam, nc))
    mode = _resolve_mode(mode, M, a, b)
    samples = 0 if mode == "exhaustive" else 2 * (restarts + 1)
    lo_count, lo_rows, lo_cols = _extreme(M, a, b, True, mode, seed, restarts)
    lo = lo_count / (a * b)
    if lo < (1 - lam) * p - TOL:
        return DensityCertificate("uniform", params, mode, "refuted", (lo_rows, lo_cols), lo, lo, samples, "low")
    hi_count, hi_rows, hi_cols = _extreme(M, a, b, False, mode, seed + 1, restarts)
    hi = hi_count / (a * b)
    if hi > (1 + lam) * p + TOL:
        return DensityCertificate("uniform", params, mode, "refuted", (hi_rows, hi_cols), hi, hi, samples, "high")
    return DensityCertificate("uniform", params, mode, "pass", None, None, lo, samples)


@dataclass(frozen=True)
class BipartitePair:
    """Two disjoint vertex sets of a host graph."""

    host: Graph
    X: tuple[int, ...]
    Y: tuple[int, ...]

    def __post_init__(self) -> None:
        if set(self.X) & set(self.Y):
            raise InputError("pair sides must be disjoint")
        if any(not 0 <= v < self.host.n for v in (*self.X, *self.Y)):
            raise InputError("pair vertex outside the host")

    def matrix(self) -> np.ndarray:
        M = np.zeros((len(self.X), len(self.Y)), dtype=bool)
        col = {v: j for j, v in enumerate(self.Y)}
        for i, u in enumerate(self.X):
            for w in self.host.neighbors(u):
                j = col.get(w)
                if j is not None:
                    M[i, j] = True
        return M


def _relabel(cert: DensityCertificate, pair: BipartitePair) -> DensityCertificate:
    if cert.witness is None:
        return cert
    rows, cols = cert.witness
    return DensityCertificate(
        cert.kind, cert.params, cert.mode, cert.verdict,
        (tuple(pair.X[r] for r in rows), tuple(pair.Y[c] for c in cols)),
        cert.witness_density, cert.extreme_density, cert.samples, cert.side,
    )


def check_dense_pair(pair: BipartitePair, eps: float, alpha: float, p: float,
                     mode: str = "auto", seed: int = 0, restarts: int = 16) -> DensityCertificate:
    cert = check_dense_matrix(pair.matrix(), eps, alpha, p, mode, seed, restarts)
    return _relabel(cert, pair)


def check_uniform(pair: BipartitePair, lam: float, p: float,
                  mode: str = "auto", seed: int = 0, restarts: int = 16) -> DensityCertificate:
    cert = check_uniform_matrix(pair.matrix(), lam, p, mode, seed, restarts)
    return _relabel(cert, pair)


# auxiliary graph and congestion ---------------------------------------------


def build_auxiliary_graph(
    g: Graph, k: int, family: Sequence[Iterable[int]], U: Iterable[int]
) -> list[tuple[int, int]]:
    """Incidences ``(i, v)``: ``v`` in ``U`` is adjacent to every vertex of ``family[i]``."""
    if k < 1:
        raise InputError("k must be positive")
    sets = [frozenset(K) for K in family]
    U = sorted(set(U))
    used: set[int] = set()
    for K in sets:
        if len(K) != k:
            raise InputError(f"family member {sorted(K)} is not a {k}-set")
        if K & used:
            raise InputError("family members overlap")
        used |= K
    if used & set(U):
        raise InputError("family members meet U")
    out = []
    for i, K in enumerate(sets):
        for v in U:
            if all(g.has_edge(w, v) for w in K):
                out.append((i, v))
    return out


@dataclass(frozen=True)
class CongestionCertificate:
    k: int
    xi: float
    p: float
    mode: str
    verdict: str
    family: tuple[tuple[int, ...], ...] | None = None
    U: tuple[int, ...] | None = None
    incidences: int | None = None
    bound: float | None = None
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "k": self.k, "xi": self.xi, "p": self.p, "mode": self.mode,
            "verdict": self.verdict,
            "family": None if self.family is None else [list(K) for K in self.family],
            "U": None if self.U is None else list(self.U),
            "incidences": self.incidences, "bound": self.bound, "samples": self.samples,
        }


def congestion_bound(n: int, k: int, xi: float, p: float, f: int, u: int) -> float:
    return p**k * f * u + 6 * xi * n * p**k * f


def _common_neighbour_masks(g: Graph, k: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    sets = list(itertools.combinations(range(g.n), k))
    cn = np.ones((len(sets), g.n), dtype=np.int64)
    adj = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = 1
    for i, K in enumerate(sets):
        for w in K:
            cn[i] *= adj[w]
    return sets, cn


@functools.lru_cache(maxsize=32)
def _disjoint_families(n: int, k: int, f: int) -> np.ndarray:
    """All families of ``f`` pairwise disjoint ``k``-subsets of ``range(n)``
    as indices into ``itertools.combinations(range(n), k)``."""
    sets = list(itertools.combinations(range(n), k))
    masks = [sum(1 << v for v in K) for K in sets]
    out: list[tuple[int, ...]] = []

    def rec(start: int, used: int, acc: list[int]) -> None:
        if len(acc) == f:
            out.append(tuple(acc))
            return
        for i in range(start, len(sets)):
            if masks[i] & used:
                continue
            acc.append(i)
            rec(i + 1, used | masks[i], acc)
            acc.pop()

    rec(0, 0, [])
    return np.array(out, dtype=np.intp).reshape(-1, f)


def _best_u(counts: np.ndarray, blocked: np.ndarray, f: int, n: int, k: int, xi: float, p: float):
    """Maximise incidences minus bound over ``U`` (top ``<= f`` scores)."""
    pk = p**k
    vals = np.where(blocked, -np.inf, counts - pk * f)
    order = np.argsort(-vals, axis=1, kind="stable")[:, :f]
    prefix = np.cumsum(np.take_along_axis(vals, order, axis=1), axis=1)
    prefix = np.concatenate([np.zeros((len(vals), 1)), prefix], axis=1)
    best_len = np.argmax(prefix, axis=1)
    gain = prefix[np.arange(len(vals)), best_len]
    return gain - 6 * xi * n * pk * f, order, best_len


def check_congestion(
    g: Graph,
    k: int,
    xi: float,
    p: float,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 2000,
) -> CongestionCertificate:
    """Search for disjoint ``k``-sets ``F`` and ``U`` violating the incidence bound.

    For a fixed family the best ``U`` takes the vertices with the largest
    common-neighbour counts, so only families are enumerated (exhaustive
    mode) or sampled (sampled mode).
    """
    if k < 1:
        raise InputError("k must be positive")
    if xi <= 0 or not 0 < p <= 1:
        raise InputError("need xi > 0 and p in (0, 1]")
    n = g.n
    fmax = min(math.floor(xi * n + TOL), n // k)
    if mode == "exhaustive" and (n > EXACT_CONGESTION_LIMIT or k > 2):
        raise SizeGuardError(
            f"exhaustive congestion check refused above {EXACT_CONGESTION_LIMIT} vertices or k > 2"
        )
    if mode not in ("exhaustive", "sampled"):
        raise InputError(f"unknown mode {mode!r}")
    if fmax == 0 or n == 0:
        return CongestionCertificate(k, xi, p, mode, "pass")
    sets, cn = _common_neighbour_masks(g, k)
    rng = np.random.default_rng(seed)
    drawn = 0
    for f in range(1, fmax + 1):
        if mode == "exhaustive":
            fams = _disjoint_families(n, k, f)
        else:
            fams = _random_families(n, k, f, samples // fmax + 1, rng, len(sets))
            drawn += len(fams)
        for start in range(0, len(fams), 8192):
            chunk = fams[start:start + 8192]
            counts = cn[chunk].sum(axis=1).astype(float)
            blocked = np.zeros((len(chunk), n), dtype=bool)
            for j in range(f):
                members = np.array([sets[i] for i in chunk[:, j]], dtype=np.intp)
                np.put_along_axis(blocked, members, True, axis=1)
            excess, order, best_len = _best_u(counts, blocked, f, n, k, xi, p)
            bad = np.flatnonzero(excess > TOL)
            if bad.size:
                i = int(bad[0])
                family = tuple(sets[j] for j in chunk[i])
                U = tuple(sorted(int(v) for v in order[i, : best_len[i]]))
                inc = len(build_auxiliary_graph(g, k, family, U))
                return CongestionCertificate(
                    k, xi, p, mode, "refuted", family, U, inc,
                    congestion_bound(n, k, xi, p, f, len(U)), drawn,
                )
    return CongestionCertificate(k, xi, p, mode, "pass", samples=drawn)


def _random_families(n, k, f, count, rng, nsets):
    index = {K: i for i, K in enumerate(itertools.combinations(range(n), k))}
    out = []
    for _ in range(count):
        perm = rng.permutation(n)[: f * k]
        fam = sorted(index[tuple(sorted(int(v) for v in perm[j * k:(j + 1) * k]))] for j in range(f))
        out.append(fam)
    return np.array(out, dtype=np.intp).reshape(-1, f)


def congestion_violation(g: Graph, k: int, xi: float, p: float, family, U) -> bool:
    """Independent check that ``(family, U)`` is an admissible violating witness."""
    f = len(family)
    if f > xi * g.n + TOL or len(U) > f:
        return False
    inc = len(build_auxiliary_graph(g, k, family, U))
    return inc > congestion_bound(g.n, k, xi, p, f, len(U)) + TOL


# bad families ----------------------------------------------------------------


@dataclass(frozen=True)
class BadFamilyCertificate:
    variant: str
    conditions: dict
    bad: bool
    bad_x: tuple[int, ...]
    threshold: float
    mode: str

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "conditions": self.conditions,
            "bad": self.bad,
            "bad_x": list(self.bad_x),
            "threshold": self.threshold,
            "mode": self.mode,
        }


def _sub(g: Graph, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    return BipartitePair(g, tuple(rows), tuple(cols)).matrix()


def check_bad_family(
    g: Graph,
    X: Sequence[int],
    Y: Sequence[int],
    Z: Sequence[int],
    variant: str,
    alpha: float,
    eps_prime: float,
    eps: float,
    mu: float,
    eta: float,
    p: float,
    mode: str = "auto",
    seed: int = 0,
) -> BadFamilyCertificate:
    """Decide membership of the tripartite graph on ``X, Y, Z`` in the bad family.

    Variant ``"I"`` inspects ``(N(x) ∩ Y, Z)``, variant ``"II"`` inspects
    ``(N(x) ∩ Y, N(x) ∩ Z)``. Condition (c) holds when at least ``mu |X|``
    vertices ``x`` give a non-dense pair.
    """
    if variant not in ("I", "II"):
        raise InputError("variant must be 'I' or 'II'")
    X, Y, Z = tuple(X), tuple(Y), tuple(Z)
    if set(X) & set(Y) or set(X) & set(Z) or set(Y) & set(Z):
        raise InputError("X, Y and Z must be pairwise disjoint")
    cond = {}
    cond["a"] = check_dense_matrix(_sub(g, X, Y), eta, alpha, p, mode, seed).passed
    if variant == "II":
        cond["a"] = cond["a"] and check_dense_matrix(_sub(g, X, Z), eta, alpha, p, mode, seed).passed
    cond["b"] = check_dense_matrix(_sub(g, Y, Z), eps, alpha, p, mode, seed).passed
    bad_x = []
    for x in X:
        ny = tuple(y for y in Y if g.has_edge(x, y))
        nz = tuple(z for z in Z if g.has_edge(x, z)) if variant == "II" else Z
        cert = check_dense_matrix(_sub(g, ny, nz), eps_prime, alpha, p, mode, seed)
        if not cert.passed:
            bad_x.append(x)
    threshold = mu * len(X)
    cond["c"] = len(bad_x) >= threshold - TOL and mu <= 1
    return BadFamilyCertificate(variant, cond, all(cond.values()), tuple(bad_x), threshold, mode)


def find_bad_triple(
    g: Graph,
    sizes: tuple[int, int, int],
    variant: str,
    alpha: float,
    eps_prime: float,
    eps: float,
    mu: float,
    eta: float,
    p: float,
    tries: int = 50,
    seed: int = 0,
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None:
    """Sampled refuter for the denseness property: look for disjoint vertex
    sets of the given sizes that induce a bad tripartite graph."""
    if sum(sizes) > g.n:
        return None
    rng = np.random.default_rng(seed)
    for t in range(tries):
        perm = [int(v) for v in rng.permutation(g.n)]
        a, b, _ = sizes
        X = tuple(sorted(perm[:a]))
        Y = tuple(sorted(perm[a:a + b]))
        Z = tuple(sorted(perm[a + b:a + b + sizes[2]]))
        cert = check_bad_family(g, X, Y, Z, variant, alpha, eps_prime, eps, mu, eta, p, "auto", seed + t)
        if cert.bad:
            return X, Y, Z
    return None
