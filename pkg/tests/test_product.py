from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sizeramsey.errors import CertificateError, InputError, PartitionInvariantError
from sizeramsey.generators import random_bounded_tw, random_tree
from sizeramsey.graph import (
    Graph,
    complete_binary_tree,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    star_graph,
    verify_product_embedding,
)
from sizeramsey.product import (
    compute_s,
    embed_into_product,
    reach_parameter,
    recursive_partition,
    tree_power_factorization,
)
from sizeramsey.separators import TreewidthProfile, log_levels

from .oracles import bfs_all
from .strategies import trees

SQRT = TreewidthProfile.sqrt(1, 1)


# parameters --------------------------------------------------------------------


def test_reach_parameter():
    assert reach_parameter(3) == 4
    assert [reach_parameter(d) for d in (2, 4, 5, 8, 9)] == [3, 4, 5, 5, 6]


def test_s_for_single_vertex():
    p = compute_s(1, 2, TreewidthProfile.constant(1))
    assert (p.k, p.s) == (3, 9)


def test_s_is_monotone_in_n():
    prof = TreewidthProfile.constant(5)
    assert compute_s(1000, 3, prof).s >= compute_s(100, 3, prof).s


@given(st.integers(1, 5000), st.integers(2, 20), st.integers(0, 6))
def test_s_formula_by_hand(n, delta, c):
    prof = TreewidthProfile.constant(c)
    k = reach_parameter(delta)
    want = k + k * (log_levels(n) + 1) * (c + 1)
    assert compute_s(n, delta, prof).s == want


@given(st.integers(1, 10**6), st.integers(2, 16), st.floats(0.1, 1.0), st.floats(0.5, 4.0))
def test_case_ii_bound_brackets_s(n, delta, a, c):
    p = compute_s(n, delta, TreewidthProfile.power(c, a))
    assert p.case == "ii"
    assert p.case_ii_lower < p.s <= p.case_ii_bound + 1e-9


def test_rounded_presets_do_not_claim_case_ii():
    assert compute_s(400, 3, SQRT).case_ii_bound is None


def test_compute_s_rejects_bad_input():
    with pytest.raises(InputError):
        compute_s(0, 3, SQRT)
    with pytest.raises(InputError):
        compute_s(5, 1, SQRT)


# recursive partition -------------------------------------------------------------


def test_small_graph_is_single_bag():
    g = cycle_graph(10)
    part = recursive_partition(g, 2, TreewidthProfile.constant(2))
    assert part.tree.n == 1 and part.bags[0] == frozenset(range(10))


def test_grid_8x8_distance_property():
    g = grid_graph(8)
    part = recursive_partition(g, 4, SQRT, s=14)
    assert part.tree.n > 1
    assert not part.violations(g)
    assert g.num_edges == 112 and part.k == 4
    owner = {v: i for i, bag in enumerate(part.bags) for v in bag}
    dist = bfs_all(part.tree.n, part.tree.edges)
    assert all(dist[owner[u]][owner[v]] <= part.k for u, v in g.edges)


def test_random_tree_200_bags_are_exact():
    g = random_tree(200, 3, seed=5).graph
    part = recursive_partition(g, 3, TreewidthProfile.constant(1), s=9)
    assert not part.violations(g)
    assert sorted(v for bag in part.bags for v in bag) == list(range(200))
    leaves = {i for i in range(1, part.tree.n) if part.tree.degree(i) == 1}
    assert leaves and all(len(b) == 18 for i, b in enumerate(part.bags) if i not in leaves)


def test_formula_s_on_random_tree_is_one_bag():
    g = random_tree(200, 3, seed=5).graph
    part = recursive_partition(g, 3, TreewidthProfile.constant(1))
    assert part.s == compute_s(200, 3, TreewidthProfile.constant(1)).s
    assert not part.violations(g)


def test_too_small_budget_raises():
    g = grid_graph(8)
    with pytest.raises(PartitionInvariantError):
        recursive_partition(g, 4, SQRT, s=6)


@settings(max_examples=40, deadline=None)
@given(st.integers(10, 120), st.integers(1, 3), st.integers(0, 2**31), st.integers(3, 30))
def test_partition_properties_on_bounded_tw(n, width, seed, s):
    # a forced budget below the formula either certifies or fails loudly
    inst = random_bounded_tw(n, 3, width, seed)
    g = inst.graph
    prof = TreewidthProfile.constant(width)
    try:
        part = recursive_partition(g, 3, prof, s=s, td=inst.decomposition)
    except PartitionInvariantError:
        return
    assert not part.violations(g)
    assert sum(len(b) for b in part.bags) == n


# tree power factorization --------------------------------------------------------


def test_k1_is_identity():
    t = complete_binary_tree(3)
    f = tree_power_factorization(t, 1)
    assert f.tree.edges == t.edges and f.node_map == tuple(range(t.n)) and f.multiplicity == 1


def test_p7_k2_pairs():
    t = path_graph(7)
    f = tree_power_factorization(t, 2)
    dist = bfs_all(7, t.edges)
    for u, v in itertools.combinations(range(7), 2):
        if dist[u][v] <= 2:
            a, b = f.node_map[u], f.node_map[v]
            assert a == b or f.tree.has_edge(a, b)


def test_binary_tree_depth4_k3_bounds():
    f = tree_power_factorization(complete_binary_tree(4), 3)
    assert not f.violations(complete_binary_tree(4))
    assert f.multiplicity <= 2 ** 6
    assert f.tree.max_degree <= 1 + 2**3
    assert f.tree.is_tree()


def test_factorization_rejects_bad_trees():
    with pytest.raises(InputError):
        tree_power_factorization(cycle_graph(4), 2)
    with pytest.raises(InputError):
        tree_power_factorization(star_graph(4), 2)
    with pytest.raises(InputError):
        tree_power_factorization(path_graph(3), 0)


@settings(max_examples=80, deadline=None)
@given(trees(max_n=60), st.integers(1, 4))
def test_factorization_property_exhaustive(t, k):
    f = tree_power_factorization(t, k)
    dist = bfs_all(t.n, t.edges)
    for u, v in itertools.combinations(range(t.n), 2):
        if dist[u][v] <= k:
            a, b = f.node_map[u], f.node_map[v]
            assert a == b or f.tree.has_edge(a, b)
    assert f.tree.is_tree() and f.tree.n <= t.n
    assert f.tree.max_degree <= 1 + 2**k
    counts = np.bincount(f.node_map)
    assert counts.max() == f.multiplicity <= 2 ** (2 * k) - 1 + (k == 1)


# end to end ----------------------------------------------------------------------


def test_single_edge_embeds_on_one_node():
    pe = embed_into_product(path_graph(2), 2, TreewidthProfile.constant(1))
    assert pe.tree.n == 1 and pe.clique_size >= 2
    assert verify_product_embedding(pe)["pass"]


def test_grid_12x12_with_formula_s():
    g = grid_graph(12)
    pe = embed_into_product(g, 4, SQRT)
    cert = pe.certificate
    assert verify_product_embedding(pe)["pass"] and cert["verified"]
    assert pe.tree.n <= 144 / cert["s"] + 1
    assert pe.tree.max_degree <= 1 + 2 ** cert["k"]


def test_grid_12x12_with_forced_small_s():
    g = grid_graph(12)
    pe = embed_into_product(g, 4, SQRT, s=30)
    cert = pe.certificate
    # three partition nodes sit within one depth window, so they fold together
    assert cert["partition_nodes"] == 3 and pe.tree.n == 1
    assert verify_product_embedding(pe)["pass"]
    assert cert["tree_vertices_ok"] and cert["tree_max_degree_ok"]
    assert cert["s_prime"] == cert["multiplicity"] * 2 * 30


def test_outerplanar_like_graph():
    # a cycle with a short chord every sixth vertex: outerplanar, degree <= 3
    n = 150
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, i + 2) for i in range(0, n - 3, 6)]
    g = Graph.from_edges(n, edges)
    assert g.max_degree <= 3
    pe = embed_into_product(g, 3, TreewidthProfile.constant(2))
    assert verify_product_embedding(pe)["pass"]
    assert pe.certificate["tree_vertices_ok"] and pe.certificate["tree_max_degree_ok"]


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 200), st.integers(0, 2**31), st.one_of(st.none(), st.integers(3, 30)))
def test_end_to_end_certificate(n, seed, s):
    inst = random_bounded_tw(n, 3, 2, seed)
    try:
        pe = embed_into_product(inst.graph, 3, TreewidthProfile.constant(2), s=s, td=inst.decomposition)
    except PartitionInvariantError:
        assert s is not None
        return
    rep = verify_product_embedding(pe)
    assert rep["pass"], rep["violations"]
    assert pe.certificate["tree_vertices_ok"] and pe.certificate["tree_max_degree_ok"]


def test_complete_graph_needs_large_profile():
    with pytest.raises(CertificateError):
        embed_into_product(complete_graph(12), 11, TreewidthProfile.constant(1), s=2)


@pytest.mark.parametrize("n, s", [(600, 8), (600, 20)])
def test_long_path_folds_onto_several_nodes(n, s):
    g = path_graph(n)
    pe = embed_into_product(g, 2, TreewidthProfile.constant(1), s=s)
    cert = pe.certificate
    assert pe.tree.n > 1 and cert["partition_nodes"] > pe.tree.n
    assert verify_product_embedding(pe)["pass"]
    assert pe.tree.n <= n / s + 1
    assert pe.tree.max_degree <= 1 + 2 ** cert["k"]
    assert cert["multiplicity"] <= 2 ** (2 * cert["k"]) - 1
