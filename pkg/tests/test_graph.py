from __future__ import annotations

import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import alpha, atlas, isomorphic, to_nx
from orelab.graph import (
    Graph,
    Graph6Error,
    GraphError,
    LoopError,
    SizeLimitError,
    VertexSet,
    boundary,
    canonical_form,
    canonical_labeling,
    d3_subgraph,
    delete_vertices,
    emit_graph6,
    identify_vertices,
    independence_number,
    maximum_independent_sets,
    ore_degree,
    parse_graph6,
    relabel,
    split_vertex,
    two_separations,
    unordered_splits,
)
from strategies import graphs


def shuffled(g: Graph, rng: random.Random) -> Graph:
    order = list(range(g.n))
    rng.shuffle(order)
    return relabel(g, order)


# graph6


def test_graph6_known_strings():
    assert emit_graph6(Graph.complete(4)) == "C~"
    assert emit_graph6(Graph.empty(2)) == "A?"
    assert emit_graph6(Graph.empty(1)) == "@"
    assert parse_graph6("C~") == Graph.complete(4)
    assert parse_graph6(">>graph6<<C~\n") == Graph.complete(4)


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    assert parse_graph6(emit_graph6(g)) == g


@given(graphs(min_n=1, max_n=12))
def test_graph6_matches_networkx(g):
    assert emit_graph6(g).encode() == nx.to_graph6_bytes(to_nx(g), header=False).strip()


@pytest.mark.parametrize("bad, offset", [("", 0), ("C~~", 2), ("B~", 1), ("C\x7f", 1), ("D", 1)])
def test_graph6_errors_carry_offsets(bad, offset):
    with pytest.raises(Graph6Error) as exc:
        parse_graph6(bad)
    assert exc.value.offset == offset


def test_graph6_long_form_rejected():
    with pytest.raises(Graph6Error):
        parse_graph6("~?@?")
    with pytest.raises(SizeLimitError):
        emit_graph6(Graph.empty(63))


# construction and basic queries


def test_constructor_rejects_bad_rows():
    with pytest.raises(GraphError):
        Graph(2, [0b10, 0])  # asymmetric
    with pytest.raises(GraphError):
        Graph(1, [0b1])  # loop
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(SizeLimitError):
        Graph.empty(65)


def test_vertex_set_checks_range():
    with pytest.raises(GraphError):
        VertexSet.of(3, [3])
    with pytest.raises(GraphError):
        boundary(Graph.complete(3), VertexSet.of(4, [0]))


def test_ore_degree_examples(W5):
    assert ore_degree(Graph.complete(4)) == 6
    assert ore_degree(W5) == 8
    with pytest.raises(GraphError):
        ore_degree(Graph.empty(3))


@given(graphs(min_n=2))
def test_ore_degree_matches_definition(g):
    es = g.edges()
    if not es:
        return
    assert ore_degree(g) == max(g.degree(u) + g.degree(v) for u, v in es)


def test_d3_and_boundary(H7):
    d3, verts = d3_subgraph(H7)
    assert list(verts) == [1, 2, 3, 4, 5, 6]
    assert d3.num_edges == 11 - 4
    assert independence_number(H7, verts) == 2
    assert list(boundary(H7, [0, 1, 2, 3])) == [0, 1]
    with pytest.raises(GraphError):
        boundary(H7, range(7))


@given(graphs(max_n=9), st.data())
def test_independence_number_matches_brute_force(g, data):
    within = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    assert independence_number(g, within) == alpha(g, within)


@given(graphs(max_n=8))
def test_maximum_independent_sets_are_exactly_the_maximum_ones(g):
    a = alpha(g, range(g.n))
    expected = set()
    for s in combinations(range(g.n), a):
        if all(not g.has_edge(u, v) for u, v in combinations(s, 2)):
            expected.add(sum(1 << v for v in s))
    assert set(maximum_independent_sets(g)) == expected


# surgery


def test_identify_and_delete(W5):
    merged, rel = identify_vertices(W5, [[0, 2]])
    assert merged.n == 5 and rel[2] == rel[0]
    with pytest.raises(LoopError):
        identify_vertices(W5, [[0, 1]])
    dropped, _ = identify_vertices(W5, [[0, 1]], allow_internal_edges=True)
    assert dropped.n == 5
    g, m = delete_vertices(W5, [5])
    assert g == Graph.cycle(5) and m[4] == 4


def test_split_vertex_keeps_degrees():
    g = Graph.complete(4)
    g2, z1, z2 = split_vertex(g, 0, [1], [2, 3])
    assert (g2.n, z1, z2) == (5, 0, 4)
    assert g2.degree(0) == 1 and g2.degree(4) == 2 and not g2.has_edge(0, 4)
    with pytest.raises(GraphError):
        split_vertex(g, 0, [1], [2])
    with pytest.raises(GraphError):
        split_vertex(g, 0, [], [1, 2, 3])


def test_unordered_splits_count():
    # 2^(d-1) - 1 unordered splits into two nonempty parts
    for d in range(1, 7):
        assert len(list(unordered_splits((1 << d) - 1))) == 2 ** (d - 1) - 1


@given(graphs(min_n=3, max_n=8))
def test_two_separations_match_networkx(g):
    h = to_nx(g)
    expected = set()
    if nx.is_connected(h):
        for x, y in combinations(range(g.n), 2):
            k = h.copy()
            k.remove_nodes_from([x, y])
            if k.number_of_nodes() and not nx.is_connected(k):
                expected.add((x, y))
    found = {xy for xy, _ in two_separations(g)}
    if nx.is_connected(h):
        assert found == expected


# canonical form


@given(graphs(max_n=9), st.randoms(use_true_random=False))
def test_canonical_form_invariant_under_relabelling(g, rng):
    assert canonical_form(g) == canonical_form(shuffled(g, rng))


@given(graphs(max_n=7), graphs(max_n=7))
def test_canonical_form_decides_isomorphism(a, b):
    if a.n == b.n and a.num_edges == b.num_edges:
        assert (canonical_form(a) == canonical_form(b)) == isomorphic(a, b)


@pytest.mark.parametrize("n", range(1, 7))
def test_canonical_forms_separate_the_atlas(n):
    forms = [canonical_form(g) for g in atlas(n)]
    assert len(set(forms)) == len(forms)


def test_canonical_labeling_is_a_permutation_and_capped():
    g = Graph.cycle(9)
    assert sorted(canonical_labeling(g)) == list(range(9))
    with pytest.raises(SizeLimitError):
        canonical_form(Graph.cycle(13))
    assert canonical_form(Graph.cycle(13), 20)


def test_regular_graphs_stay_distinct():
    petersen = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                                + [(i, i + 5) for i in range(5)]
                                + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])
    prism = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                             + [(i, i + 5) for i in range(5)]
                             + [(5 + i, 5 + (i + 1) % 5) for i in range(5)])
    assert canonical_form(petersen) != canonical_form(prism)
    assert canonical_form(Graph.cycle(5)) != canonical_form(Graph.path(5))
