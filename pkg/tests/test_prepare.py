from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sizeramsey.errors import InputError
from sizeramsey.generators import grid_instance, path_instance, random_bounded_tw
from sizeramsey.graph import Graph, path_graph
from sizeramsey.product import embed_into_product
from sizeramsey.ramsey.prepare import class_bound, cube_color_bound, prepare_H
from sizeramsey.separators import TreewidthProfile

from .oracles import bfs_all


def test_class_bounds():
    assert class_bound(2) == 21
    assert class_bound(3) == 88
    assert cube_color_bound(3) == 22


def test_edgeless_graph():
    h = Graph.empty(6)
    prep = prepare_H(h, path_graph(2), [0, 0, 0, 1, 1, 1], [0, 1, 2, 0, 1, 2], 3, 2)
    assert prep.left_degree == (0,) * 6
    assert not prep.violations(h)


def test_invalid_witness_rejected():
    h = path_graph(3)
    with pytest.raises(InputError):
        prepare_H(h, path_graph(3), [0, 2, 1], [0, 0, 0], 1, 2)
    with pytest.raises(InputError):
        prepare_H(h, path_graph(2), [0, 0, 1], [0, 0, 0], 2, 2)


def test_degree_cap_enforced():
    inst = grid_instance(3)
    with pytest.raises(InputError):
        prepare_H(inst.graph, inst.witness.tree, inst.witness.node, inst.witness.slot, 3, 3)


def check_prep(h, prep):
    assert not prep.violations(h)
    dist = bfs_all(h.n, h.edges)
    for members in prep.classes():
        for i, u in enumerate(members):
            for w in members[i + 1:]:
                assert dist[u][w] >= 4
            assert prep.left_degree[u] == sum(prep.g[w] < prep.g[u] for w in h.neighbors(u))
    per_node = {}
    for u in range(h.n):
        per_node.setdefault(prep.node[u], set()).add(prep.local[u])
    assert all(len(c) <= class_bound(prep.max_degree) for c in per_node.values())


def test_grid_preparation():
    inst = grid_instance(4)
    w = inst.witness
    check_prep(inst.graph, prepare_H(inst.graph, w.tree, w.node, w.slot, w.clique_size, 4))


def test_path_preparation_uses_bfs_order():
    inst = path_instance(12, 3)
    w = inst.witness
    prep = prepare_H(inst.graph, w.tree, w.node, w.slot, w.clique_size, 2)
    assert prep.order == (0, 1, 2, 3)
    check_prep(inst.graph, prep)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(2, 3), st.integers(0, 2**31))
def test_preparation_properties(n, delta, seed):
    inst = random_bounded_tw(n, delta, 2, seed)
    pe = embed_into_product(inst.graph, delta, TreewidthProfile.constant(2), td=inst.decomposition)
    prep = prepare_H(inst.graph, pe.tree, pe.node, pe.slot, pe.clique_size, delta)
    check_prep(inst.graph, prep)
