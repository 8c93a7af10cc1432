from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import atlas, chromatic, colorable, count_colorings, edge_list, is_critical
from orelab.coloring import (
    Coloring,
    chromatic_number,
    colorable_mask,
    enumerate_colorings,
    find_coloring,
    is_boundary_k_colorable,
    is_f_k_colorable,
    is_k_critical,
    is_proper,
)
from orelab.graph import Graph, GraphError
from strategies import graphs

PETERSEN = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                            + [(i, i + 5) for i in range(5)]
                            + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


def test_small_examples(W5):
    assert chromatic_number(Graph.complete(4)) == 4
    assert chromatic_number(Graph.cycle(5)) == 3
    assert chromatic_number(PETERSEN) == 3
    assert chromatic_number(W5) == 4
    assert chromatic_number(Graph.empty(0)) == 0
    assert find_coloring(Graph.complete(4), 3) is None


def test_triangle_has_six_3_colorings():
    cols = list(enumerate_colorings(Graph.complete(3), 3))
    assert len(cols) == 6
    assert cols[0].colors == (1, 2, 3)  # lexicographic order


def test_coloring_accessors():
    c = Coloring(3, (0, 2, 5), (1, 1, 3))
    assert c[5] == 3
    assert c.classes() == [[0, 2], [], [5]]
    assert c.partition() == frozenset({frozenset({0, 2}), frozenset({5})})


@given(graphs(max_n=7), st.integers(1, 4))
def test_find_coloring_agrees_with_brute_force(g, k):
    found = find_coloring(g, k)
    assert (found is not None) == colorable(g.n, edge_list(g), k)
    if found is not None:
        assert is_proper(g, found)


@given(graphs(max_n=6), st.integers(1, 3))
def test_enumeration_counts_every_colouring_once(g, k):
    cols = list(enumerate_colorings(g, k))
    assert len(cols) == count_colorings(g, k)
    assert len(set(cols)) == len(cols)
    assert all(is_proper(g, c) for c in cols)


@given(graphs(max_n=8), st.data())
def test_colorable_mask_on_induced_subgraphs(g, data):
    verts = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    k = data.draw(st.integers(0, 4))
    mask = sum(1 << v for v in verts)
    assert colorable_mask(g.adj, mask, k) == colorable(g.n, edge_list(g), k, verts)


@given(graphs(max_n=7))
def test_chromatic_number_matches_oracle(g):
    assert chromatic_number(g) == chromatic(g)


def test_criticality_examples(W5):
    assert is_k_critical(Graph.complete(4), 4)
    assert is_k_critical(W5, 4)
    assert is_k_critical(Graph.cycle(5), 3)
    assert not is_k_critical(Graph.wheel(6), 4)
    assert not is_k_critical(Graph.complete(5), 4)
    assert is_k_critical(Graph.complete(2), 2)
    with pytest.raises(GraphError):
        is_k_critical(Graph.complete(2), 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_criticality_matches_oracle_on_atlas(n):
    for g in atlas(n):
        for k in (3, 4):
            assert is_k_critical(g, k) == is_critical(g, k), (g, k)


def test_f_colorability():
    k3 = Graph.complete(3)
    # every vertex of a triangle must avoid colour 1: impossible with 3 colours
    assert not is_f_k_colorable(k3, [0, 1, 2], {0: 1, 1: 1, 2: 1}, 3)
    assert is_f_k_colorable(k3, [0, 1, 2], {0: 1, 1: 2, 2: 3}, 3)
    with pytest.raises(GraphError):
        is_f_k_colorable(k3, [0, 1], {0: 1}, 3)


def _boundary_colorable_brute(g, roots, k):
    roots = sorted(roots)
    for f in product(range(1, k + 1), repeat=len(roots)):
        if len(set(f)) == 1:
            continue
        ok = False
        for col in product(range(1, k + 1), repeat=g.n):
            if all(col[u] != col[v] for u, v in edge_list(g)) and all(col[r] != c for r, c in zip(roots, f)):
                ok = True
                break
        if not ok:
            return False
    return True


@given(graphs(min_n=2, max_n=6), st.data())
def test_boundary_colorability_matches_brute_force(g, data):
    roots = data.draw(st.sets(st.integers(0, g.n - 1), min_size=2, max_size=min(g.n, 4)))
    assert is_boundary_k_colorable(g, roots, 3) == _boundary_colorable_brute(g, roots, 3)


def test_boundary_colorability_needs_two_roots():
    with pytest.raises(GraphError):
        is_boundary_k_colorable(Graph.complete(3), [0], 3)
