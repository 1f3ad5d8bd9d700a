from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sizeramsey.errors import InputError, SizeGuardError
from sizeramsey.graph import Graph, complete_graph
from sizeramsey.ramsey.predicates import (
    BipartitePair,
    build_auxiliary_graph,
    check_bad_family,
    check_congestion,
    check_dense_matrix,
    check_dense_pair,
    check_uniform,
    check_uniform_matrix,
    congestion_violation,
    density,
    extreme_subpair_exact,
    extreme_subpair_sampled,
    subset_size,
)

from .oracles import congestion_holds, dense_pair_holds, uniform_pair_holds


def bipartite(M: np.ndarray) -> BipartitePair:
    a, b = M.shape
    edges = [(i, a + j) for i in range(a) for j in range(b) if M[i, j]]
    return BipartitePair(Graph.from_edges(a + b, edges), tuple(range(a)), tuple(range(a, a + b)))


small_matrices = st.tuples(st.integers(1, 8), st.integers(1, 8)).flatmap(
    lambda shape: arrays(np.bool_, shape)
)


# basics --------------------------------------------------------------------


def test_subset_size_is_tolerant_ceiling():
    assert subset_size(0.25, 12) == 3
    assert subset_size(1 / 3, 12) == 4
    assert subset_size(0.1, 15) == 2


def test_density_of_empty_selection_is_zero():
    assert density(np.ones((2, 2), bool), [], [0]) == 0.0


def test_pair_sides_must_be_disjoint():
    with pytest.raises(InputError):
        BipartitePair(complete_graph(3), (0, 1), (1, 2))


# dense pairs ----------------------------------------------------------------


def test_complete_pair_is_dense():
    cert = check_dense_pair(bipartite(np.ones((6, 6), bool)), 0.2, 1.0, 1.0)
    assert cert.passed


def test_empty_pair_refuted_with_whole_sides():
    pair = bipartite(np.zeros((4, 4), bool))
    cert = check_dense_pair(pair, 0.9, 1.0, 1.0, mode="exhaustive")
    assert cert.verdict == "refuted"
    assert set(cert.witness[0]) == set(pair.X) and set(cert.witness[1]) == set(pair.Y)


def test_empty_pair_refuted_small_eps():
    cert = check_dense_pair(bipartite(np.zeros((4, 4), bool)), 0.25, 0.5, 1.0)
    assert not cert.passed and cert.witness_density == 0.0


def test_random_12x12_matches_enumeration():
    rng = np.random.default_rng(12)
    M = rng.random((12, 12)) < 0.5
    cert = check_dense_matrix(M, 1 / 3, 1 / 4, 1.0, mode="exhaustive")
    assert cert.passed == dense_pair_holds(M, 1 / 3, 1 / 4, 1.0)


def test_exhaustive_size_guard():
    with pytest.raises(SizeGuardError):
        check_dense_matrix(np.ones((17, 3), bool), 0.5, 1.0, 1.0, mode="exhaustive")


def test_parameter_ranges_checked():
    with pytest.raises(InputError):
        check_dense_matrix(np.ones((2, 2), bool), 0.0, 0.5, 1.0)
    with pytest.raises(InputError):
        check_dense_matrix(np.ones((2, 2), bool), 0.5, 0.5, 1.5)


def test_vacuous_threshold_passes_without_search():
    cert = check_dense_matrix(np.zeros((20, 20), bool), 0.5, 0.5, 1.0)
    assert cert.passed


def test_refuting_witness_is_genuine_in_sampled_mode():
    rng = np.random.default_rng(1)
    M = rng.random((60, 60)) < 0.5
    M[:20, :20] = False
    cert = check_dense_matrix(M, 0.25, 0.5, 1.0, mode="sampled", seed=3)
    assert cert.verdict == "refuted"
    rows, cols = cert.witness
    assert len(rows) >= 15 and len(cols) >= 15
    assert density(M, rows, cols) == pytest.approx(cert.witness_density)
    assert cert.witness_density < 0.25


@settings(max_examples=150, deadline=None)
@given(small_matrices, st.sampled_from([0.1, 0.25, 1 / 3, 0.5, 1.0]), st.sampled_from([0.25, 0.5, 0.75, 1.0]),
       st.sampled_from([0.5, 1.0]))
def test_dense_exhaustive_matches_oracle(M, eps, alpha, p):
    cert = check_dense_matrix(M, eps, alpha, p, mode="exhaustive")
    assert cert.passed == dense_pair_holds(M, eps, alpha, p)
    if not cert.passed:
        rows, cols = cert.witness
        assert len(rows) >= subset_size(eps, M.shape[0]) and len(cols) >= subset_size(eps, M.shape[1])
        assert density(M, rows, cols) < (alpha - eps) * p


@settings(max_examples=100, deadline=None)
@given(small_matrices, st.sampled_from([0.25, 0.5]), st.integers(0, 100))
def test_sampled_refutations_are_sound(M, eps, seed):
    cert = check_dense_matrix(M, eps, 0.75, 1.0, mode="sampled", seed=seed)
    if not cert.passed:
        assert not dense_pair_holds(M, eps, 0.75, 1.0)


@given(small_matrices)
def test_extreme_exact_bounds_every_subpair(M):
    a, b = max(1, M.shape[0] // 2), max(1, M.shape[1] // 2)
    low, rows, cols = extreme_subpair_exact(M, a, b, True)
    high, _, _ = extreme_subpair_exact(M, a, b, False)
    assert int(M[np.ix_(rows, cols)].sum()) == low
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = rng.choice(M.shape[0], a, replace=False)
        c = rng.choice(M.shape[1], b, replace=False)
        assert low <= M[np.ix_(r, c)].sum() <= high


def test_sampled_search_reports_real_counts():
    rng = np.random.default_rng(5)
    M = rng.random((40, 30)) < 0.4
    count, rows, cols = extreme_subpair_sampled(M, 10, 8, True, np.random.default_rng(2), 4)
    assert len(rows) == 10 and len(cols) == 8
    assert int(M[np.ix_(rows, cols)].sum()) == count


# uniform pairs -------------------------------------------------------------


def test_complete_pair_uniform_at_p1():
    assert check_uniform(bipartite(np.ones((5, 7), bool)), 0.3, 1.0).passed


def test_isolated_half_refuted():
    M = np.ones((10, 10), bool)
    M[:5] = False
    cert = check_uniform_matrix(M, 0.1, 0.5)
    assert cert.verdict == "refuted" and cert.side == "low"


def test_too_dense_refuted_high():
    cert = check_uniform_matrix(np.ones((6, 6), bool), 0.2, 0.5)
    assert cert.verdict == "refuted" and cert.side == "high"


def test_random_12_uniform_matches_enumeration():
    rng = np.random.default_rng(4)
    M = rng.random((12, 12)) < 0.5
    cert = check_uniform_matrix(M, 0.4, 0.5, mode="exhaustive")
    assert cert.passed == uniform_pair_holds(M, 0.4, 0.5)


@settings(max_examples=150, deadline=None)
@given(small_matrices, st.sampled_from([0.2, 0.4, 0.5, 0.8]), st.sampled_from([0.3, 0.5, 0.9]))
def test_uniform_exhaustive_matches_oracle(M, lam, p):
    cert = check_uniform_matrix(M, lam, p, mode="exhaustive")
    assert cert.passed == uniform_pair_holds(M, lam, p)


# auxiliary graph and congestion --------------------------------------------


def test_auxiliary_k1_is_edge_restriction():
    g = Graph.from_edges(5, [(0, 3), (1, 3), (1, 4), (2, 4)])
    inc = build_auxiliary_graph(g, 1, [{0}, {1}], [3, 4])
    assert inc == [(0, 3), (1, 3), (1, 4)]


def test_auxiliary_k4_pair():
    assert build_auxiliary_graph(complete_graph(4), 2, [{0, 1}], [2, 3]) == [(0, 2), (0, 3)]


def test_auxiliary_empty_graph():
    assert build_auxiliary_graph(Graph.empty(6), 2, [{0, 1}, {2, 3}], [4, 5]) == []


def test_auxiliary_rejects_overlaps():
    with pytest.raises(InputError):
        build_auxiliary_graph(complete_graph(5), 2, [{0, 1}, {1, 2}], [4])
    with pytest.raises(InputError):
        build_auxiliary_graph(complete_graph(5), 1, [{0}], [0])
    with pytest.raises(InputError):
        build_auxiliary_graph(complete_graph(5), 2, [{0}], [3])


def test_empty_graph_has_congestion_property():
    assert check_congestion(Graph.empty(10), 1, 0.5, 0.1).passed


def test_k6_congestion_refuted():
    g = complete_graph(6)
    cert = check_congestion(g, 1, 1.0, 0.01)
    assert cert.verdict == "refuted"
    assert congestion_violation(g, 1, 1.0, 0.01, cert.family, cert.U)
    # the witness F = {v}, U = N(v) breaks |U| <= |F|, so it is not admissible
    assert not congestion_violation(g, 1, 1.0, 0.01, [(0,)], [1, 2, 3, 4, 5])
    assert congestion_violation(g, 1, 1.0, 0.01, [(0,)], [1])


def test_random_g12_congestion_matches_enumeration():
    rng = np.random.default_rng(12)
    edges = [(u, v) for u in range(12) for v in range(u + 1, 12) if rng.random() < 0.5]
    g = Graph.from_edges(12, edges)
    cert = check_congestion(g, 2, 0.3, 0.5)
    assert cert.passed == congestion_holds(12, edges, 2, 0.3, 0.5)


def test_congestion_size_guard():
    with pytest.raises(SizeGuardError):
        check_congestion(Graph.empty(15), 1, 0.1, 0.5)
    with pytest.raises(SizeGuardError):
        check_congestion(Graph.empty(8), 3, 0.1, 0.5)


def test_sampled_congestion_witness_is_genuine():
    g = complete_graph(20)
    cert = check_congestion(g, 2, 0.1, 0.05, mode="sampled", seed=1, samples=200)
    assert cert.verdict == "refuted"
    assert congestion_violation(g, 2, 0.1, 0.05, cert.family, cert.U)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.integers(1, 2), st.sampled_from([0.05, 0.1, 0.2, 0.4]), st.data())
def test_congestion_matches_oracle(n, k, p, data):
    edges = [e for e in ((u, v) for u in range(n) for v in range(u + 1, n)) if data.draw(st.booleans())]
    xi = data.draw(st.sampled_from([1 / n, 2 / n, 3 / n]))
    g = Graph.from_edges(n, edges)
    cert = check_congestion(g, k, xi, p)
    assert cert.passed == congestion_holds(n, edges, k, xi, p)
    if not cert.passed:
        assert congestion_violation(g, k, xi, p, cert.family, cert.U)


# bad families ----------------------------------------------------------------


def tripartite(xy: np.ndarray, yz: np.ndarray, xz: np.ndarray | None = None):
    nx, ny = xy.shape
    nz = yz.shape[1]
    X = tuple(range(nx))
    Y = tuple(range(nx, nx + ny))
    Z = tuple(range(nx + ny, nx + ny + nz))
    edges = [(X[i], Y[j]) for i in range(nx) for j in range(ny) if xy[i, j]]
    edges += [(Y[i], Z[j]) for i in range(ny) for j in range(nz) if yz[i, j]]
    if xz is not None:
        edges += [(X[i], Z[j]) for i in range(nx) for j in range(nz) if xz[i, j]]
    return Graph.from_edges(nx + ny + nz, edges), X, Y, Z


def test_complete_tripartite_is_not_bad():
    g, X, Y, Z = tripartite(np.ones((4, 6), bool), np.ones((6, 6), bool), np.ones((4, 6), bool))
    for variant in ("I", "II"):
        cert = check_bad_family(g, X, Y, Z, variant, 0.5, 0.25, 0.25, 0.5, 0.01, 1.0)
        assert not cert.bad and cert.bad_x == ()


def test_constructed_bad_family():
    # each x sees exactly the half of Y that is isolated from Z
    yz = np.zeros((8, 8), bool)
    yz[4:] = True
    g, X, Y, Z = tripartite(np.zeros((4, 8), bool), yz)
    edges = set(g.edges)
    for x in X:
        edges |= {(x, Y[j]) for j in range(4)}
    g = Graph.from_edges(g.n, edges)
    cert = check_bad_family(g, X, Y, Z, "I", alpha=1.0, eps_prime=0.5, eps=0.75, mu=1.0, eta=0.75, p=1.0)
    assert cert.conditions == {"a": True, "b": True, "c": True}
    assert cert.bad and cert.bad_x == X


def test_mu_above_one_is_never_bad():
    yz = np.zeros((8, 8), bool)
    g, X, Y, Z = tripartite(np.ones((4, 8), bool), yz)
    cert = check_bad_family(g, X, Y, Z, "I", 0.5, 0.5, 0.5, 1.5, 0.5, 1.0)
    assert not cert.bad


def test_bad_family_rejects_overlap_and_variant():
    g = complete_graph(6)
    with pytest.raises(InputError):
        check_bad_family(g, (0, 1), (1, 2), (3, 4), "I", 0.5, 0.5, 0.5, 0.5, 0.01, 1.0)
    with pytest.raises(InputError):
        check_bad_family(g, (0, 1), (2, 3), (4, 5), "III", 0.5, 0.5, 0.5, 0.5, 0.01, 1.0)
