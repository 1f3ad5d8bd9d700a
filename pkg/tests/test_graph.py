from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sizeramsey.errors import InputError
from sizeramsey.graph import (
    EdgeColoring,
    Graph,
    ProductEmbedding,
    complete_binary_tree,
    complete_graph,
    cycle_graph,
    graph_power,
    greedy_coloring,
    grid_graph,
    is_proper_coloring,
    path_graph,
    star_graph,
    strong_product,
    verify_product_embedding,
)

from .oracles import bfs_all, strong_product_edges
from .strategies import graphs, trees


# construction ----------------------------------------------------------------


def test_from_edges_rejects_loops_and_range():
    with pytest.raises(InputError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 5)])


def test_from_edges_merges_reversed_duplicates():
    # only the file parser treats duplicates as errors
    assert Graph.from_edges(3, [(0, 1), (1, 0)]).num_edges == 1


def test_basic_accessors():
    g = path_graph(4)
    assert g.num_edges == 3
    assert g.max_degree == 2
    assert g.neighbors(1) == {0, 2}
    assert g.has_edge(2, 1) and not g.has_edge(0, 3)
    assert g.is_tree() and g.is_connected()
    assert cycle_graph(5).num_edges == 5 and not cycle_graph(5).is_tree()


def test_induced_relabels_in_sorted_order():
    g = cycle_graph(6)
    sub, old = g.induced([5, 0, 1])
    assert old == [0, 1, 5]
    assert sub.sorted_edges() == [(0, 1), (0, 2)]


def test_grid_and_binary_tree_shapes():
    g = grid_graph(3)
    assert (g.n, g.num_edges, g.max_degree) == (9, 12, 4)
    t = complete_binary_tree(3)
    assert t.is_tree() and t.n == 15 and t.max_degree == 3


# strong product --------------------------------------------------------------


def test_product_with_single_vertex_is_identity():
    h = cycle_graph(5)
    assert strong_product(Graph.empty(1), h).edges == h.edges


def test_k2_times_k2_is_k4():
    assert strong_product(complete_graph(2), complete_graph(2)).edges == complete_graph(4).edges


def test_p3_times_p3_has_20_edges():
    assert strong_product(path_graph(3), path_graph(3)).num_edges == 20


def test_product_of_empty_graphs():
    assert strong_product(Graph.empty(0), path_graph(3)).n == 0


@given(graphs(max_n=6), graphs(max_n=6))
def test_product_matches_pairwise_oracle(g, h):
    p = strong_product(g, h)
    assert p.n == g.n * h.n
    assert set(p.edges) == strong_product_edges(g.n, g.edges, h.n, h.edges)


@given(graphs(max_n=7), graphs(max_n=7))
def test_product_edge_count_identity(g, h):
    e = strong_product(g, h).num_edges
    assert e == g.n * h.num_edges + h.n * g.num_edges + 2 * g.num_edges * h.num_edges


@given(graphs(max_n=6), graphs(max_n=6))
def test_product_commutes_under_coordinate_swap(g, h):
    gh, hg = strong_product(g, h), strong_product(h, g)

    def swap(v: int) -> int:
        a, b = divmod(v, h.n)
        return b * g.n + a

    swapped = {tuple(sorted((swap(u), swap(v)))) for u, v in gh.edges}
    assert swapped == set(hg.edges)


# graph power -----------------------------------------------------------------


def test_power_one_is_identity():
    t = complete_binary_tree(3)
    assert graph_power(t, 1).edges == t.edges


def test_power_examples():
    assert graph_power(path_graph(4), 2).sorted_edges() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert graph_power(star_graph(3), 2).edges == complete_graph(4).edges


def test_power_rejects_zero():
    with pytest.raises(InputError):
        graph_power(path_graph(3), 0)


@given(graphs(max_n=9), st.integers(1, 4))
def test_power_matches_distance_table(g, k):
    dist = bfs_all(g.n, g.edges)
    want = {(u, v) for u, v in itertools.combinations(range(g.n), 2) if dist[u][v] <= k}
    assert set(graph_power(g, k).edges) == want


@given(graphs(max_n=9), st.integers(1, 4))
def test_power_is_monotone_in_k(g, k):
    assert graph_power(g, k).edges <= graph_power(g, k + 1).edges


# coloring --------------------------------------------------------------------


def test_greedy_coloring_examples():
    assert greedy_coloring(Graph.empty(4)) == [0, 0, 0, 0]
    assert len(set(greedy_coloring(complete_graph(4), [2, 0, 3, 1]))) == 4
    c5 = greedy_coloring(cycle_graph(5))
    assert len(set(c5)) == 3 and is_proper_coloring(cycle_graph(5), c5)


def test_greedy_coloring_rejects_non_permutation():
    with pytest.raises(InputError):
        greedy_coloring(path_graph(3), [0, 0, 1])


@given(graphs(max_n=12), st.data())
def test_greedy_coloring_proper_and_bounded(g, data):
    order = data.draw(st.permutations(range(g.n)))
    col = greedy_coloring(g, order)
    assert is_proper_coloring(g, col)
    assert max(col, default=-1) + 1 <= g.max_degree + 1
    assert col == greedy_coloring(g, order)


def test_edge_coloring_must_be_total_and_in_range():
    g = path_graph(3)
    EdgeColoring(g, 2, {(0, 1): 0, (1, 2): 1})
    with pytest.raises(InputError):
        EdgeColoring(g, 2, {(0, 1): 0})
    with pytest.raises(InputError):
        EdgeColoring(g, 2, {(0, 1): 0, (1, 2): 2})


# product embeddings ----------------------------------------------------------


def test_identity_into_tree_times_k1_passes():
    t = complete_binary_tree(2)
    pe = ProductEmbedding(t, t, 1, tuple(range(t.n)), (0,) * t.n)
    rep = verify_product_embedding(pe)
    assert rep["pass"] and rep["violations"] == []
    assert rep["metrics"]["tree_vertices"] == t.n


def test_c4_two_per_node_on_p2_passes():
    pe = ProductEmbedding(cycle_graph(4), path_graph(2), 2, (0, 0, 1, 1), (0, 1, 0, 1))
    assert verify_product_embedding(pe)["pass"]


def test_duplicate_image_reports_injectivity():
    pe = ProductEmbedding(path_graph(2), path_graph(2), 1, (0, 0), (0, 0))
    rep = verify_product_embedding(pe)
    assert not rep["pass"]
    assert any(v.startswith("injectivity") for v in rep["violations"])


def test_non_tree_host_reported():
    pe = ProductEmbedding(path_graph(2), cycle_graph(3), 1, (0, 1), (0, 0))
    assert any(v.startswith("tree") for v in verify_product_embedding(pe)["violations"])


def test_product_embedding_json_round_trip():
    pe = ProductEmbedding(cycle_graph(4), path_graph(2), 2, (0, 0, 1, 1), (0, 1, 0, 1), {"note": 1})
    back = ProductEmbedding.from_json(pe.to_json())
    assert back == pe and back.certificate == {"note": 1}


@settings(max_examples=60)
@given(graphs(max_n=8), trees(max_n=6), st.integers(1, 3), st.data())
def test_verifier_agrees_with_brute_force(g, t, size, data):
    node = tuple(data.draw(st.lists(st.integers(0, t.n - 1), min_size=g.n, max_size=g.n)))
    slot = tuple(data.draw(st.lists(st.integers(0, size - 1), min_size=g.n, max_size=g.n)))
    pe = ProductEmbedding(g, t, size, node, slot)
    injective = len({(node[v], slot[v]) for v in range(g.n)}) == g.n
    adjacent = all(node[u] == node[v] or t.has_edge(node[u], node[v]) for u, v in g.edges)
    assert verify_product_embedding(pe)["pass"] == (injective and adjacent)
