"""Exact proper colouring search, criticality and rooted colourability."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping

from .graph import Graph, GraphError, VertexSet, as_mask, bits, delete_edge


@dataclass(frozen=True)
class Coloring:
    """Colours ``1..k`` assigned to the vertices in ``domain`` (sorted)."""

    k: int
    domain: tuple[int, ...]
    colors: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.colors[self.domain.index(v)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.colors))

    def classes(self) -> list[list[int]]:
        """Colour classes in colour order; unused colours give empty classes."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in zip(self.domain, self.colors):
            out[c - 1].append(v)
        return out

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes() if c)


def is_proper(g: Graph, coloring: Coloring) -> bool:
    """Independent checker: every edge inside the domain is bichromatic."""
    col = coloring.as_dict()
    if any(not 1 <= c <= coloring.k for c in col.values()):
        return False
    return all(col[u] != col[v] for u, v in g.edges() if u in col and v in col)


def _search(
    adj: tuple[int, ...],
    order: list[int],
    k: int,
    avail: dict[int, int],
) -> Iterator[dict[int, int]]:
    """Backtracking in a fixed vertex order with forward checking.

    ``avail[v]`` is a bitmask of colours (bit ``c-1``) still open to ``v``.
    Yields assignments in lexicographic order of the colour vector.
    """
    n_order = len(order)
    assign: dict[int, int] = {}
    pos = {v: i for i, v in enumerate(order)}
    dom_mask = 0
    for v in order:
        dom_mask |= 1 << v

    def rec(i: int) -> Iterator[dict[int, int]]:
        if i == n_order:
            yield dict(assign)
            return
        v = order[i]
        open_colors = avail[v]
        later = [u for u in bits(adj[v] & dom_mask) if pos[u] > i]
        for c in range(k):
            if not open_colors >> c & 1:
                continue
            bit = 1 << c
            touched = []
            dead = False
            for u in later:
                if avail[u] & bit:
                    avail[u] &= ~bit
                    touched.append(u)
                    if not avail[u]:
                        dead = True
            if not dead:
                assign[v] = c + 1
                yield from rec(i + 1)
                del assign[v]
            for u in touched:
                avail[u] |= bit

    yield from rec(0)


def _initial_avail(g: Graph, k: int, domain: list[int], forbidden: Mapping[int, int] | None) -> dict[int, int]:
    full = (1 << k) - 1
    avail = {v: full for v in domain}
    if forbidden:
        for v, c in forbidden.items():
            if v in avail and 1 <= c <= k:
                avail[v] &= ~(1 << (c - 1))
    return avail


def find_coloring(
    g: Graph,
    k: int,
    constraints: Mapping[int, int] | None = None,
    domain: VertexSet | Iterable[int] | int | None = None,
) -> Coloring | None:
    """First proper ``k``-colouring in lexicographic order, or ``None``.

    ``constraints`` maps vertices to a colour they must avoid.
    """
    if k < 1:
        raise GraphError("k must be at least 1")
    dom = list(range(g.n)) if domain is None else list(bits(as_mask(g, domain)))
    avail = _initial_avail(g, k, dom, constraints)
    if any(a == 0 for a in avail.values()):
        return None
    for assign in _search(g.adj, dom, k, avail):
        return Coloring(k, tuple(dom), tuple(assign[v] for v in dom))
    return None


def enumerate_colorings(
    g: Graph,
    k: int,
    domain: VertexSet | Iterable[int] | int | None = None,
) -> Iterator[Coloring]:
    """Every proper ``k``-colouring of ``g[domain]``, lexicographically."""
    dom = list(range(g.n)) if domain is None else list(bits(as_mask(g, domain)))
    avail = _initial_avail(g, k, dom, None)
    for assign in _search(g.adj, dom, k, avail):
        yield Coloring(k, tuple(dom), tuple(assign[v] for v in dom))


def colorable_mask(adj: tuple[int, ...] | list[int], mask: int, k: int) -> bool:
    """Whether ``G[mask]`` is ``k``-colourable (DSATUR-style branching, yes/no only)."""
    verts = list(bits(mask))
    if not verts:
        return True
    if k <= 0:
        return False
    full = (1 << k) - 1
    avail = {v: full for v in verts}
    uncolored = set(verts)

    def rec(used: int) -> bool:
        if not uncolored:
            return True
        v = min(uncolored, key=lambda u: (avail[u].bit_count(), -(adj[u] & mask).bit_count(), u))
        opts = avail[v]
        uncolored.discard(v)
        nbrs = [u for u in bits(adj[v] & mask) if u in uncolored]
        # colours >= used have not been placed yet and are interchangeable
        for c in range(min(used + 1, k)):
            bit = 1 << c
            if not opts & bit:
                continue
            touched = [u for u in nbrs if avail[u] & bit]
            for u in touched:
                avail[u] &= ~bit
            ok = all(avail[u] for u in touched) and rec(max(used, c + 1))
            for u in touched:
                avail[u] |= bit
            if ok:
                uncolored.add(v)
                return True
        uncolored.add(v)
        return False

    return rec(0)


def is_colorable(g: Graph, k: int) -> bool:
    return colorable_mask(g.adj, g.full_mask, k)


def chromatic_number(g: Graph) -> int:
    """Least ``k`` admitting a proper colouring; 0 for the graph with no vertices."""
    if g.n == 0:
        return 0
    k = 1
    while not is_colorable(g, k):
        k += 1
    return k


@lru_cache(maxsize=65536)
def is_k_critical(g: Graph, k: int) -> bool:
    """Not ``(k-1)``-colourable while every edge deletion is."""
    if k < 2:
        raise GraphError("criticality needs k >= 2")
    if g.n == 0:
        return False
    if k == 2:
        return g.n == 2 and g.num_edges == 1
    deg = g.degrees()
    if min(deg) < k - 1 or not g.is_connected():
        return False
    if is_colorable(g, k - 1):
        return False
    for u, v in g.edges():
        if not is_colorable(delete_edge(g, u, v), k - 1):
            return False
    # edge-criticality without isolated vertices implies vertex-criticality
    full = g.full_mask
    assert all(colorable_mask(g.adj, full & ~(1 << v), k - 1) for v in range(g.n))
    return True


def is_f_k_colorable(
    g: Graph,
    roots: VertexSet | Iterable[int] | int,
    f: Mapping[int, int],
    k: int,
) -> bool:
    """Some proper ``k``-colouring gives every root a colour other than ``f(root)``."""
    rm = as_mask(g, roots)
    if set(f) != set(bits(rm)):
        raise GraphError("the forbidden assignment must be defined exactly on the roots")
    return find_coloring(g, k, constraints=f) is not None


def is_boundary_k_colorable(g: Graph, roots: VertexSet | Iterable[int] | int, k: int) -> bool:
    """``f``-``k``-colourable for every non-constant ``f: roots -> 1..k``."""
    root_list = list(bits(as_mask(g, roots)))
    if len(root_list) < 2:
        raise GraphError("boundary colourability needs at least two roots")
    for values in product(range(1, k + 1), repeat=len(root_list)):
        if len(set(values)) == 1:
            continue
        if find_coloring(g, k, constraints=dict(zip(root_list, values))) is None:
            return False
    return True
