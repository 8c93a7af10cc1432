from __future__ import annotations

from dataclasses import replace
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    collapsible_by_definition,
    isomorphic,
    min_potential_decimal,
    potential_decimal,
)
from orelab.coloring import Coloring, is_k_critical
from orelab.graph import Graph, GraphError, VertexSet, boundary_mask
from orelab.ore import K4, h7
from orelab.potential import (
    PreconditionError,
    check_extform,
    classify_small_s,
    critical_complement,
    critical_extensions,
    degree_three_reduction,
    extform_slack,
    format_scaled,
    is_cocollapsible,
    is_collapsible,
    is_collapsible_by_enumeration,
    is_identifiable_pair,
    is_tight_collapsible,
    min_potential,
    phi_identification,
    potential,
    s_value,
    to_decimal,
)
from strategies import graphs

EDGE_SIDE = [0, 1, 2, 3]  # K4 - e inside H7, ends 0 and 1


def test_scaled_formatting():
    assert [format_scaled(v) for v in (24, 15, 3, 9, -1, 0, 36)] == ["4.8", "3", "0.6", "1.8", "-0.2", "0", "7.2"]
    assert str(to_decimal(33)) == "33/5"


def test_potentials_of_small_graphs(H7):
    assert potential(Graph.complete(1)) == 27
    assert potential(Graph.complete(2)) == 36
    assert potential(Graph.complete(3)) == 30
    assert potential(K4) == 9
    assert potential(H7) == 9


@pytest.mark.parametrize("k", [5, 7, 9, 11])
def test_odd_wheel_potential(k):
    # 4.5 - 0.9k, scaled by five
    assert potential(Graph.wheel(k)) * 2 == 45 - 9 * k


def test_host_degrees_decide_d3(H7):
    # vertex 0 has degree 4 in H7 even though it has degree 2 inside the edge side
    assert potential(H7, EDGE_SIDE) == 4 * 24 - 15 * 5 + 3 * 1


@given(graphs(max_n=8), st.data())
def test_potential_matches_formula(g, data):
    r = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    assert to_decimal(potential(g, r)) == potential_decimal(g, r)


@given(graphs(min_n=1, max_n=7))
def test_min_potential_matches_brute_force(g):
    val, wit = min_potential(g)
    assert to_decimal(val) == min_potential_decimal(g)
    assert len(wit) > 0 and potential(g, wit) == val


def test_min_potential_examples(H7):
    assert min_potential(K4) == (9, VertexSet(4, 0b1111))
    assert min_potential(Graph.complete(1))[0] == 27
    assert min_potential(H7) == (9, VertexSet(7, 0b1111111))
    assert min_potential(Graph.empty(0))[0] == 0
    with pytest.raises(GraphError):
        min_potential(Graph.empty(25))


# s(H)


@pytest.mark.parametrize("g, s", [
    (Graph.complete(1), 0), (Graph.complete(2), 0),
    (Graph.complete(3), 1), (Graph.path(3), 1), (Graph.path(4), 1),
    (Graph.cycle(4), 2), (Graph.cycle(5), 2),
])
def test_s_value_examples(g, s):
    assert s_value(g) == s


def _claw_with(pendants: int) -> Graph:
    edges = [(0, 1), (0, 2), (0, 3)] + [(1 + i, 4 + i) for i in range(pendants)]
    return Graph.from_edges(4 + pendants, edges)


def test_classification_examples():
    assert classify_small_s(Graph.complete(1)) == "s0-vertex"
    assert classify_small_s(Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])) == "s2-triangle-pendant-edge"
    assert classify_small_s(Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])) == "s2-triangle-pendant-path"
    for p in range(3):
        assert classify_small_s(_claw_with(p)) == "s2-tree-alpha3"
    assert classify_small_s(_claw_with(3)) == "other"
    assert classify_small_s(Graph.complete(4)) == "other"
    with pytest.raises(GraphError):
        classify_small_s(Graph.empty(2))


@given(graphs(max_n=8))
def test_s_is_additive_over_components(g):
    total = 0
    for comp in g.components():
        sub, _ = g.induced(comp)
        total += s_value(sub)
    assert s_value(g) == total


# phi-identification


def test_phi_identification_of_wheel_rim(W5):
    phi = Coloring(3, (0, 1, 2, 3, 4), (1, 2, 1, 2, 3))
    ident = phi_identification(W5, range(5), phi)
    g = ident.graph
    assert g.n == W5.n - 5 + 3
    hub = ident.vertex_map[5]
    assert all(g.has_edge(hub, x) for x in ident.triangle)
    assert g.num_edges == 6  # K4


def test_phi_identification_single_class():
    g = Graph.from_edges(6, [(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)])
    phi = Coloring(3, (0, 1, 2, 3), (1, 1, 1, 1))
    ident = phi_identification(g, [0, 1, 2, 3], phi)
    x1, x2, x3 = ident.triangle
    assert ident.graph.n == 6 - 4 + 3
    assert ident.graph.degree(x2) == 2 and ident.graph.degree(x3) == 2
    assert ident.graph.degree(x1) == 4


def test_phi_identification_rejects_improper(H7):
    with pytest.raises(GraphError):
        phi_identification(H7, EDGE_SIDE, Coloring(3, (0, 1, 2, 3), (1, 1, 1, 2)))
    with pytest.raises(GraphError):
        phi_identification(H7, [0, 1, 2], Coloring(3, (0, 1, 2), (1, 1, 2)))


# critical extensions


def test_h7_edge_side_extension(H7):
    recs = list(critical_extensions(H7, EDGE_SIDE))
    assert len(recs) == 1
    rec = recs[0]
    assert rec.phi.partition() == frozenset({frozenset({0, 1}), frozenset({2}), frozenset({3})})
    assert rec.total and rec.complete and rec.spanning
    assert rec.core_size == 1
    assert isomorphic(rec.extender, K4)
    assert check_extform(rec) and extform_slack(rec) == 0
    js = rec.to_json()
    for key in ("r", "phi_partition", "extender_g6", "core_size", "complete", "spanning", "total"):
        assert key in js


def test_extform_catches_a_wrong_r_prime(H7):
    rec = next(critical_extensions(H7, EDGE_SIDE))
    bad = replace(rec, r_prime=VertexSet(7, 0b1111))
    assert not check_extform(bad)


def test_extension_preconditions(H7, W5):
    with pytest.raises(PreconditionError):
        list(critical_extensions(H7, [0, 1, 2]))
    with pytest.raises(GraphError):
        list(critical_extensions(H7, range(7)))
    with pytest.raises(GraphError):
        list(critical_extensions(Graph.wheel(6), [0, 1, 2, 3]))


def _critical_small():
    return [K4, h7(), Graph.wheel(5), Graph.wheel(7)]


@pytest.mark.parametrize("g", _critical_small(), ids=["K4", "H7", "W5", "W7"])
def test_every_extension_satisfies_extform(g):
    for size in range(4, g.n):
        for r in combinations(range(g.n), size):
            for rec in critical_extensions(g, r, all_extenders=g.n <= 7):
                assert rec.core
                assert is_k_critical(rec.extender, 4)
                assert check_extform(rec), rec.to_json()
                assert set(rec.r_prime) >= set(r)


# collapsible sets


def test_collapsible_examples(H7):
    assert is_collapsible(H7, EDGE_SIDE)
    assert not is_collapsible(K4, [0, 1, 2])
    assert is_collapsible(H7, [4, 5, 6]) is False
    with pytest.raises(GraphError):
        is_collapsible(Graph.wheel(6), [0, 1])
    with pytest.raises(GraphError):
        is_collapsible(H7, [0])


def test_single_boundary_vertex_is_vacuous():
    # a triangle hanging off a path: only vertex 2 sees the outside
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    assert boundary_mask(g, 0b111) == 0b100
    assert is_collapsible(g, [0, 1, 2], check_critical=False)
    assert is_collapsible_by_enumeration(g, [0, 1, 2])


@pytest.mark.parametrize("g", _critical_small(), ids=["K4", "H7", "W5", "W7"])
def test_collapsible_matches_definition(g):
    for size in range(2, g.n):
        for r in combinations(range(g.n), size):
            assert is_collapsible(g, r) == collapsible_by_definition(g, set(r))


def test_critical_complement_of_h7(H7):
    comp = critical_complement(H7, EDGE_SIDE)
    assert isomorphic(comp.graph, K4)
    assert comp.vertex_map[0] == comp.vertex_map[1] == comp.collapsed
    # p(R) >= p(G) - p(W) + 4.8
    assert potential(H7, EDGE_SIDE) >= potential(H7) - potential(comp.graph) + 24
    with pytest.raises(GraphError):
        critical_complement(K4, [0, 1, 2])


def test_tight_collapsible(H7):
    assert is_tight_collapsible(H7, EDGE_SIDE)
    with pytest.raises(GraphError):
        is_tight_collapsible(K4, [0, 1, 2])


def test_cocollapsible_examples(H7, W5):
    assert is_cocollapsible(H7, [4, 5, 6]) == (True, True)
    for g in (K4, H7, W5):
        for v in range(g.n):
            assert is_cocollapsible(g, [u for u in range(g.n) if u != v]) == (True, False)


@pytest.mark.parametrize("g", _critical_small(), ids=["K4", "H7", "W5", "W7"])
def test_nontrivial_cocollapsible_complements_collapse(g):
    for size in range(1, g.n - 1):
        for r in combinations(range(g.n), size):
            co, nontrivial = is_cocollapsible(g, r)
            if co and nontrivial:
                assert is_collapsible(g, [v for v in range(g.n) if v not in r])


# reductions and identifiable pairs


def test_degree_three_reduction_on_wheel(W5):
    rec = degree_three_reduction(W5, 0, 1, 4)
    assert rec.reduced.n == W5.n - 2
    assert isomorphic(rec.k, K4)
    assert rec.u3 == 5
    assert {0, 1, 4} <= set(rec.expansion)


def test_degree_three_reduction_errors(W5):
    with pytest.raises(GraphError):
        degree_three_reduction(W5, 5, 0, 2)  # hub has degree 5
    with pytest.raises(GraphError):
        degree_three_reduction(W5, 0, 1, 5)  # adjacent neighbours
    with pytest.raises(GraphError):
        degree_three_reduction(Graph.wheel(6), 0, 1, 5)


@pytest.mark.parametrize("g", _critical_small(), ids=["K4", "H7", "W5", "W7"])
def test_reductions_stay_non_3_colourable(g):
    for v in range(g.n):
        if g.degree(v) != 3:
            continue
        for u1, u2 in combinations(g.neighbors(v), 2):
            if g.has_edge(u1, u2):
                continue
            rec = degree_three_reduction(g, v, u1, u2)
            assert is_k_critical(rec.k, 4)
            assert rec.reduced.n == g.n - 2


def test_identifiable_pairs(H7):
    assert is_identifiable_pair(H7, 0, 1, EDGE_SIDE)
    g = Graph.from_edges(6, [(0, 4), (1, 4), (2, 5), (3, 5), (4, 5), (0, 5)])
    assert not is_identifiable_pair(g, 0, 1, [0, 1, 2, 3])
    with pytest.raises(GraphError):
        is_identifiable_pair(H7, 2, 3, EDGE_SIDE)
