"""Potential calculus for 4-critical graphs.

All potentials and charges are *scaled* integers: five times the decimal
quantity, so ``4.8 -> 24``, ``3 -> 15``, ``0.6 -> 3`` and every comparison is
exact.  ``to_decimal`` converts back for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

from .coloring import Coloring, colorable_mask, enumerate_colorings, is_boundary_k_colorable, is_k_critical
from .graph import (
    Graph,
    GraphError,
    VertexSet,
    as_mask,
    bits,
    boundary_mask,
    delete_vertices,
    emit_graph6,
    identify_vertices,
    independence_number,
    independence_number_mask,
    low_degree_mask,
)

ScaledValue = int
SCALE = 5

VERTEX_WEIGHT = 24   # 4.8
EDGE_WEIGHT = 15     # 3
ALPHA_WEIGHT = 3     # 0.6
P_K4 = 9             # 1.8
EXTFORM_DROP = {1: 24, 2: 33, 3: 27}   # 4.8 / 6.6 / 5.4
EXTFORM_INCOMPLETE_DROP = 39           # 7.8
MIN_POTENTIAL_MAX_N = 24


def to_decimal(value: ScaledValue) -> Fraction:
    return Fraction(value, SCALE)


def format_scaled(value: ScaledValue) -> str:
    """Render a scaled value as its decimal, e.g. ``9 -> '1.8'``."""
    sign = "-" if value < 0 else ""
    q, r = divmod(abs(value), SCALE)
    return f"{sign}{q}" if r == 0 else f"{sign}{q}.{2 * r}"


class PreconditionError(GraphError):
    pass


def _require_critical(g: Graph) -> None:
    if not is_k_critical(g, 4):
        raise PreconditionError("this operation needs a 4-critical graph")


def _proper_subset(g: Graph, r, min_size: int) -> int:
    m = as_mask(g, r)
    if m == g.full_mask:
        raise PreconditionError("R must be a proper subset of V(G)")
    if m.bit_count() < min_size:
        raise PreconditionError(f"R needs at least {min_size} vertices")
    return m


# ---------------------------------------------------------------------------
# Potential


def potential_mask(g: Graph, m: int, d3: int | None = None) -> ScaledValue:
    if d3 is None:
        d3 = low_degree_mask(g)
    return (
        VERTEX_WEIGHT * m.bit_count()
        - EDGE_WEIGHT * g.edges_within(m)
        + ALPHA_WEIGHT * independence_number_mask(g.adj, m & d3)
    )


def potential(g: Graph, r: VertexSet | Iterable[int] | int | None = None) -> ScaledValue:
    """Scaled ``p(R) = 4.8|R| - 3|E(G[R])| + 0.6 alpha(G[D3(G) & R])``.

    Degrees deciding ``D3`` are taken in ``g``, not in ``G[R]``.  ``r=None`` gives ``p(G)``.
    """
    m = g.full_mask if r is None else as_mask(g, r)
    return potential_mask(g, m)


def min_potential(g: Graph) -> tuple[ScaledValue, VertexSet]:
    """Least potential over nonempty vertex subsets, with the first minimiser found.

    Include-first branch and bound; the bound ignores the (nonnegative)
    independence term and charges each undecided vertex its best possible gain.
    """
    if g.n == 0:
        return 0, VertexSet(0, 0)
    if g.n > MIN_POTENTIAL_MAX_N:
        raise GraphError(f"min_potential enumerates subsets and is limited to n <= {MIN_POTENTIAL_MAX_N}")
    adj = g.adj
    d3 = low_degree_mask(g)
    n = g.n
    best_val = potential_mask(g, g.full_mask, d3)
    best_set = g.full_mask

    def rec(i: int, chosen: int, inner_edges: int) -> None:
        nonlocal best_val, best_set
        if i == n:
            if chosen and chosen != best_set:
                val = VERTEX_WEIGHT * chosen.bit_count() - EDGE_WEIGHT * inner_edges + ALPHA_WEIGHT * independence_number_mask(adj, chosen & d3)
                if val < best_val:
                    best_val, best_set = val, chosen
            return
        undecided = g.full_mask >> i << i
        # doubled to keep the half-edge bookkeeping integral
        bound2 = 2 * (VERTEX_WEIGHT * chosen.bit_count() - EDGE_WEIGHT * inner_edges)
        for v in bits(undecided):
            gain = 2 * VERTEX_WEIGHT - 2 * EDGE_WEIGHT * (adj[v] & chosen).bit_count() - EDGE_WEIGHT * (adj[v] & undecided).bit_count()
            if gain < 0:
                bound2 += gain
        if bound2 >= 2 * best_val and (chosen or bound2 > 2 * best_val):
            return
        rec(i + 1, chosen | (1 << i), inner_edges + (adj[i] & chosen).bit_count())
        rec(i + 1, chosen, inner_edges)

    rec(0, 0, 0)
    return best_val, VertexSet(n, best_set)


# ---------------------------------------------------------------------------
# s(H) and its small values


def s_value(h: Graph) -> int:
    """``|E(H)| - |V(H)| + alpha(H)``."""
    return h.num_edges - h.n + independence_number(h)


def _spider_legs(h: Graph) -> list[int] | None:
    deg = h.degrees()
    centres = [v for v in range(h.n) if deg[v] >= 3]
    if len(centres) != 1:
        return None
    c = centres[0]
    legs = []
    for start in bits(h.adj[c]):
        length, prev, cur = 1, c, start
        while deg[cur] == 2:
            nxt = next(u for u in bits(h.adj[cur]) if u != prev)
            prev, cur = cur, nxt
            length += 1
        legs.append(length)
    return sorted(legs, reverse=True)


def classify_small_s(h: Graph) -> str:
    """Structural class from the small-``s`` characterisation, read off the shape alone.

    One of ``s0-vertex``, ``s0-edge``, ``s1-triangle``, ``s1-path3``, ``s1-path4``,
    ``s2-cycle4``, ``s2-cycle5``, ``s2-triangle-pendant-edge``,
    ``s2-triangle-pendant-path``, ``s2-tree-alpha3`` or ``other``.
    """
    if h.n == 0 or not h.is_connected():
        raise GraphError("classify_small_s needs a connected graph")
    n, m = h.n, h.num_edges
    deg = h.degrees()
    if m == n - 1:
        if max(deg, default=0) <= 2:
            return {1: "s0-vertex", 2: "s0-edge", 3: "s1-path3", 4: "s1-path4",
                    5: "s2-tree-alpha3", 6: "s2-tree-alpha3"}.get(n, "other")
        legs = _spider_legs(h)
        if legs in ([1, 1, 1], [2, 1, 1], [2, 2, 1]):
            return "s2-tree-alpha3"
        return "other"
    if m == n:
        if max(deg) == 2:
            return {3: "s1-triangle", 4: "s2-cycle4", 5: "s2-cycle5"}.get(n, "other")
        # a triangle with one hanging path of length one or two
        if n in (4, 5) and sorted(deg) == ([1, 2, 2, 3] if n == 4 else [1, 2, 2, 2, 3]):
            hub = deg.index(3)
            tri = [u for u in bits(h.adj[hub]) if deg[u] == 2 and h.adj[u] & h.adj[hub]]
            if len(tri) == 2:
                return "s2-triangle-pendant-edge" if n == 4 else "s2-triangle-pendant-path"
        return "other"
    return "other"


SMALL_S = {
    "s0-vertex": 0, "s0-edge": 0,
    "s1-triangle": 1, "s1-path3": 1, "s1-path4": 1,
    "s2-cycle4": 2, "s2-cycle5": 2, "s2-triangle-pendant-edge": 2,
    "s2-triangle-pendant-path": 2, "s2-tree-alpha3": 2,
}


# ---------------------------------------------------------------------------
# phi-identification and critical extensions


@dataclass(frozen=True)
class PhiIdentification:
    """``G_phi(R)``: classes of ``R`` merged to ``x1, x2, x3`` joined in a triangle.

    ``vertex_map`` sends every host vertex to its label here; vertices of ``R``
    go to the ``x`` of their colour.
    """

    graph: Graph
    triangle: tuple[int, int, int]
    vertex_map: dict[int, int]


def phi_identification(g: Graph, r: VertexSet | Iterable[int] | int, phi: Coloring) -> PhiIdentification:
    m = as_mask(g, r)
    if m == g.full_mask or m.bit_count() < 4:
        raise PreconditionError("phi-identification needs a proper subset with at least 4 vertices")
    col = phi.as_dict()
    if set(col) != set(bits(m)) or phi.k > 3:
        raise PreconditionError("phi must 3-colour exactly the vertices of R")
    for u in bits(m):
        for v in bits(g.adj[u] & m):
            if col[u] == col[v]:
                raise PreconditionError(f"phi is improper on edge ({u}, {v})")
    outside = [v for v in range(g.n) if not m >> v & 1]
    vmap = {v: i for i, v in enumerate(outside)}
    base = len(outside)
    tri = (base, base + 1, base + 2)
    for v in bits(m):
        vmap[v] = base + col[v] - 1
    adj = [0] * (base + 3)
    for v in range(g.n):
        a = vmap[v]
        for u in bits(g.adj[v]):
            b = vmap[u]
            if a != b:
                adj[a] |= 1 << b
    for a, b in combinations(tri, 2):
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return PhiIdentification(Graph(base + 3, adj), tri, vmap)


def _without_edge(adj: list[int], u: int, v: int) -> None:
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)


def critical_subgraph(g: Graph, k: int = 4) -> tuple[Graph, list[int]]:
    """A ``k``-critical subgraph by greedy edge deletion in lexicographic edge order.

    Returns the subgraph on its support and the host labels of its vertices.
    """
    if colorable_mask(g.adj, g.full_mask, k - 1):
        raise PreconditionError(f"graph is {k - 1}-colourable; it has no {k}-critical subgraph")
    adj = list(g.adj)
    for u, v in g.edges():
        _without_edge(adj, u, v)
        if colorable_mask(adj, g.full_mask, k - 1):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return _support(g.n, adj)


def _support(n: int, adj: list[int]) -> tuple[Graph, list[int]]:
    keep = [v for v in range(n) if adj[v]]
    sub, _ = Graph(n, adj).induced(sum(1 << v for v in keep))
    return sub, keep


def all_critical_subgraphs(g: Graph, k: int = 4) -> list[tuple[Graph, list[int]]]:
    """Every ``k``-critical subgraph of ``g`` (exhaustive; small graphs only)."""
    edges = g.edges()
    full = g.full_mask

    def adj_of(present: int) -> list[int]:
        adj = [0] * g.n
        for i in bits(present):
            u, v = edges[i]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    if colorable_mask(g.adj, full, k - 1):
        return []
    seen: set[int] = set()
    minimal: list[int] = []
    stack = [(1 << len(edges)) - 1]
    while stack:
        present = stack.pop()
        if present in seen:
            continue
        seen.add(present)
        leaf = True
        for i in bits(present):
            smaller = present & ~(1 << i)
            if not colorable_mask(adj_of(smaller), full, k - 1):
                leaf = False
                if smaller not in seen:
                    stack.append(smaller)
        if leaf:
            minimal.append(present)
    return [_support(g.n, adj_of(p)) for p in sorted(minimal, reverse=True)]


@dataclass(frozen=True)
class ExtensionRecord:
    """One critical extension ``R' = (W - T) + R`` of ``R`` with extender ``W``.

    ``extender_vertices[i]`` is the label in ``identification.graph`` of
    extender vertex ``i``; ``core`` lists the colours ``i`` whose ``x_i`` lies in ``W``.
    """

    graph: Graph
    r: VertexSet
    phi: Coloring
    identification: PhiIdentification
    extender: Graph
    extender_vertices: tuple[int, ...]
    r_prime: VertexSet
    core: tuple[int, ...]
    complete: bool
    spanning: bool

    @property
    def total(self) -> bool:
        return self.complete and self.spanning

    @property
    def core_size(self) -> int:
        return len(self.core)

    def to_json(self) -> dict:
        return {
            "g6": emit_graph6(self.graph),
            "r": sorted(self.r),
            "phi_partition": sorted(sorted(c) for c in self.phi.partition()),
            "extender_g6": emit_graph6(self.extender),
            "r_prime": sorted(self.r_prime),
            "core_size": self.core_size,
            "complete": self.complete,
            "spanning": self.spanning,
            "total": self.total,
        }


def _extension_record(g: Graph, m: int, phi: Coloring, ident: PhiIdentification, w: Graph, wverts: list[int]) -> ExtensionRecord:
    tri = ident.triangle
    back = {lab: v for v, lab in ident.vertex_map.items() if not m >> v & 1}
    wpos = {lab: i for i, lab in enumerate(wverts)}
    core = tuple(i + 1 for i, x in enumerate(tri) if x in wpos)
    new_vertices = [back[lab] for lab in wverts if lab not in tri]
    new_mask = sum(1 << v for v in new_vertices)
    tri_mask_w = sum(1 << wpos[x] for x in tri if x in wpos)
    complete = True
    for v in new_vertices:
        into_r = (g.adj[v] & m).bit_count()
        kept = (w.adj[wpos[ident.vertex_map[v]]] & tri_mask_w).bit_count()
        if into_r > kept:
            complete = False
            break
    if complete:
        for v in new_vertices:
            for u in bits(g.adj[v] & new_mask):
                if not w.has_edge(wpos[ident.vertex_map[v]], wpos[ident.vertex_map[u]]):
                    complete = False
                    break
    r_prime = m | new_mask
    return ExtensionRecord(
        graph=g,
        r=VertexSet(g.n, m),
        phi=phi,
        identification=ident,
        extender=w,
        extender_vertices=tuple(wverts),
        r_prime=VertexSet(g.n, r_prime),
        core=core,
        complete=complete,
        spanning=r_prime == g.full_mask,
    )


def critical_extensions(
    g: Graph,
    r: VertexSet | Iterable[int] | int,
    all_extenders: bool = False,
) -> Iterator[ExtensionRecord]:
    """Critical extensions of ``R``, one per colour-class partition of ``R``.

    With ``all_extenders`` every 4-critical subgraph of each identification is
    used instead of the single lexicographically minimised one.
    """
    _require_critical(g)
    m = _proper_subset(g, r, 4)
    if not colorable_mask(g.adj, m, 3):
        raise PreconditionError("G[R] is not 3-colourable")
    seen: set[frozenset[frozenset[int]]] = set()
    for phi in enumerate_colorings(g, 3, m):
        key = phi.partition()
        if key in seen:
            continue
        seen.add(key)
        ident = phi_identification(g, m, phi)
        if colorable_mask(ident.graph.adj, ident.graph.full_mask, 3):
            raise AssertionError(f"phi-identification of {emit_graph6(g)} is 3-colourable")
        extenders = all_critical_subgraphs(ident.graph) if all_extenders else [critical_subgraph(ident.graph)]
        for w, wverts in extenders:
            yield _extension_record(g, m, phi, ident, w, wverts)


def extform_slack(rec: ExtensionRecord) -> ScaledValue:
    """``p(R) + p(W) - drop - p(R')``; nonnegative exactly when the inequality holds."""
    g = rec.graph
    drop = EXTFORM_DROP[rec.core_size]
    if not rec.complete:
        drop = max(drop, EXTFORM_INCOMPLETE_DROP)
    return potential(g, rec.r) + potential(rec.extender) - drop - potential(g, rec.r_prime)


def check_extform(rec: ExtensionRecord) -> bool:
    """``p(R') <= p(R) + p(W) - 4.8/6.6/5.4`` by core size, ``- 7.8`` when incomplete."""
    if rec.core_size not in EXTFORM_DROP:
        return False
    return extform_slack(rec) >= 0


# ---------------------------------------------------------------------------
# Collapsible and cocollapsible sets


def is_collapsible(g: Graph, r: VertexSet | Iterable[int] | int, check_critical: bool = True) -> bool:
    """Every 3-colouring of ``G[R]`` is constant on the boundary of ``R``."""
    if check_critical:
        _require_critical(g)
    m = _proper_subset(g, r, 2)
    return _collapsible_mask(g, m, check_critical)


def _collapsible_mask(g: Graph, m: int, strict: bool) -> bool:
    if not colorable_mask(g.adj, m, 3):
        if strict:
            raise AssertionError("a proper subset of a 4-critical graph must be 3-colourable")
        return True
    bd = list(bits(boundary_mask(g, m)))
    if len(bd) < 2:
        return True
    u0 = bd[0]
    adj = list(g.adj)
    for v in bd[1:]:
        if g.has_edge(u0, v):
            return False
        adj[u0] |= 1 << v
        adj[v] |= 1 << u0
        ok = not colorable_mask(adj, m, 3)
        adj[u0] = g.adj[u0]
        adj[v] = g.adj[v]
        if not ok:
            return False
    return True


def is_collapsible_by_enumeration(g: Graph, r: VertexSet | Iterable[int] | int) -> bool:
    """Reference check straight from the definition: enumerate every 3-colouring."""
    m = as_mask(g, r)
    bd = list(bits(boundary_mask(g, m)))
    for phi in enumerate_colorings(g, 3, m):
        if len({phi[v] for v in bd}) > 1:
            return False
    return True


def find_collapsible(g: Graph, avoid: int = 0, check_critical: bool = True) -> int | None:
    """Smallest-first search for a collapsible set disjoint from ``avoid``."""
    if check_critical:
        _require_critical(g)
    allowed = [v for v in range(g.n) if not avoid >> v & 1]
    for size in range(2, len(allowed) + 1):
        for combo in combinations(allowed, size):
            m = sum(1 << v for v in combo)
            if m == g.full_mask:
                continue
            if _collapsible_mask(g, m, check_critical):
                return m
    return None


@dataclass(frozen=True)
class CriticalComplement:
    graph: Graph
    collapsed: int
    vertex_map: dict[int, int]


def critical_complement(g: Graph, r: VertexSet | Iterable[int] | int) -> CriticalComplement:
    """Identify the boundary of ``R`` to one vertex and delete the rest of ``R``."""
    m = as_mask(g, r)
    if not is_collapsible(g, m):
        raise PreconditionError("R is not collapsible")
    bd = boundary_mask(g, m)
    inner = m & ~bd
    g1, map1 = delete_vertices(g, inner)
    merged, map2 = identify_vertices(g1, [[map1[v] for v in bits(bd)]])
    vmap = {v: map2[map1[v]] for v in map1}
    collapsed = vmap[next(bits(bd))]
    if not is_k_critical(merged, 4):
        raise AssertionError(f"critical complement of {emit_graph6(g)} is not 4-critical")
    return CriticalComplement(merged, collapsed, vmap)


def _plus_edge(g: Graph, m: int, u: int, v: int) -> Graph:
    sub, pos = g.induced(m)
    adj = list(sub.adj)
    a, b = pos[u], pos[v]
    adj[a] |= 1 << b
    adj[b] |= 1 << a
    return Graph(sub.n, adj)


def is_tight_collapsible(g: Graph, r: VertexSet | Iterable[int] | int) -> bool:
    """``G[R] + uv`` is 4-critical for every pair ``u, v`` of boundary vertices."""
    m = as_mask(g, r)
    if not is_collapsible(g, m):
        raise PreconditionError("R is not collapsible")
    bd = list(bits(boundary_mask(g, m)))
    return all(is_k_critical(_plus_edge(g, m, u, v), 4) for u, v in combinations(bd, 2))


def is_cocollapsible(g: Graph, r: VertexSet | Iterable[int] | int) -> tuple[bool, bool]:
    """``(cocollapsible, nontrivial)`` for ``R``.

    Cocollapsible: every boundary vertex has exactly one neighbour outside ``R``
    and ``(G[R], boundary)`` is boundary 3-colourable.  Nontrivial: more than one
    vertex lies outside ``R``.
    """
    m = _proper_subset(g, r, 1)
    outside = g.full_mask & ~m
    nontrivial = outside.bit_count() > 1
    bd = boundary_mask(g, m)
    if any((g.adj[v] & outside).bit_count() != 1 for v in bits(bd)):
        return False, nontrivial
    if bd.bit_count() < 2:
        # no non-constant assignment exists on fewer than two roots
        return colorable_mask(g.adj, m, 3), nontrivial
    sub, pos = g.induced(m)
    roots = [pos[v] for v in bits(bd)]
    return is_boundary_k_colorable(sub, roots, 3), nontrivial


# ---------------------------------------------------------------------------
# Degree-three reductions and identifiable pairs


@dataclass(frozen=True)
class ReductionRecord:
    """``K(v; u1, u2)``: delete ``v``, merge ``u1`` and ``u2``, keep a 4-critical subgraph."""

    graph: Graph
    v: int
    u1: int
    u2: int
    u3: int
    reduced: Graph
    merged: int
    k: Graph
    k_vertices: tuple[int, ...]
    expansion: VertexSet

    def to_json(self) -> dict:
        return {
            "g6": emit_graph6(self.graph),
            "v": self.v,
            "u1": self.u1,
            "u2": self.u2,
            "u3": self.u3,
            "reduced_g6": emit_graph6(self.reduced),
            "k_g6": emit_graph6(self.k),
            "expansion": sorted(self.expansion),
        }


def degree_three_reduction(g: Graph, v: int, u1: int, u2: int) -> ReductionRecord:
    if g.degree(v) != 3:
        raise PreconditionError(f"vertex {v} does not have degree three")
    if not (g.has_edge(v, u1) and g.has_edge(v, u2)) or u1 == u2:
        raise PreconditionError("u1 and u2 must be distinct neighbours of v")
    if g.has_edge(u1, u2):
        raise PreconditionError("u1 and u2 are adjacent")
    if colorable_mask(g.adj, g.full_mask, 3):
        raise PreconditionError("degree-three reductions need a graph that is not 3-colourable")
    (u3,) = [u for u in bits(g.adj[v]) if u not in (u1, u2)]
    g1, map1 = delete_vertices(g, 1 << v)
    reduced, map2 = identify_vertices(g1, [[map1[u1], map1[u2]]])
    merged = map2[map1[u1]]
    if colorable_mask(reduced.adj, reduced.full_mask, 3):
        raise AssertionError("a degree-three reduction came out 3-colourable")
    k, kverts = critical_subgraph(reduced)
    back: dict[int, int] = {}
    for old, mid in map1.items():
        back.setdefault(map2[mid], old)
    exp = (1 << v) | (1 << u1) | (1 << u2)
    for lab in kverts:
        if lab != merged:
            exp |= 1 << back[lab]
    return ReductionRecord(g, v, u1, u2, u3, reduced, merged, k, tuple(kverts), VertexSet(g.n, exp))


def is_identifiable_pair(g: Graph, u: int, v: int, r: VertexSet | Iterable[int] | int) -> bool:
    """``u, v`` lie on the boundary of ``R`` and ``G[R] + uv`` is not 3-colourable."""
    m = as_mask(g, r)
    bd = boundary_mask(g, m) if m != g.full_mask else 0
    if not (bd >> u & 1 and bd >> v & 1) or u == v:
        raise PreconditionError("u and v must be distinct boundary vertices of R")
    if g.has_edge(u, v):
        raise PreconditionError("u and v are adjacent")
    return not colorable_mask(_plus_edge(g, m, u, v).adj, (1 << m.bit_count()) - 1, 3)
