from __future__ import annotations

import pytest
from hypothesis import given, settings

from sizeramsey.errors import SizeGuardError
from sizeramsey.graph import Graph, complete_binary_tree, complete_graph, cycle_graph, grid_graph, path_graph
from sizeramsey.treedecomp import (
    EXACT_LIMIT,
    TreeDecomposition,
    from_elimination_order,
    tree_decomposition,
    treewidth,
    treewidth_bounds,
)

from .oracles import treewidth_dp
from .strategies import graphs, trees


def test_trees_have_width_one():
    for t in (path_graph(7), complete_binary_tree(3)):
        assert tree_decomposition(t, "exact").width == 1
        assert tree_decomposition(t, "heuristic").width == 1


def test_c6_exact_width_two():
    assert treewidth(cycle_graph(6)) == 2


def test_k5_width_four():
    assert tree_decomposition(complete_graph(5), "exact").width == 4
    assert tree_decomposition(complete_graph(5), "heuristic").width == 4


def test_exact_mode_size_guard():
    with pytest.raises(SizeGuardError):
        tree_decomposition(path_graph(EXACT_LIMIT + 1), "exact")


def test_invalid_decomposition_is_reported():
    g = path_graph(3)
    td = TreeDecomposition(path_graph(2), (frozenset({0, 1}), frozenset({2})))
    assert not td.is_valid(g)
    assert any("edge" in v for v in td.violations(g))


def test_running_intersection_violation_detected():
    g = Graph.empty(1)
    td = TreeDecomposition(path_graph(3), (frozenset({0}), frozenset(), frozenset({0})))
    assert td.violations(g)


def test_grid_heuristic_is_valid():
    g = grid_graph(5)
    td = tree_decomposition(g)
    assert td.is_valid(g) and td.width >= 5


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_exact_matches_subset_dp(g):
    td = tree_decomposition(g, "exact")
    assert td.is_valid(g)
    assert td.width == max(treewidth_dp(g.n, g.edges), 0) or g.n == 0


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_heuristic_valid_and_not_below_exact(g):
    td = tree_decomposition(g, "heuristic")
    assert td.is_valid(g)
    if g.n:
        assert td.width >= treewidth(g)


@given(trees(max_n=25))
def test_restrict_stays_valid(t):
    td = tree_decomposition(t)
    keep = list(range(0, t.n, 2))
    sub, _ = t.induced(keep)
    assert td.restrict(keep).is_valid(sub)


@given(graphs(max_n=10))
def test_any_elimination_order_gives_valid_decomposition(g):
    td = from_elimination_order(g, list(range(g.n))[::-1])
    assert td.is_valid(g)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_bounds_bracket_exact_width(g):
    lower, td = treewidth_bounds(g)
    assert td.is_valid(g)
    if g.n:
        assert lower <= treewidth(g) <= td.width
