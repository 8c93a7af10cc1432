"""Ore-compositions, 4-Ore generation and recognition, diamonds, uncollapsible vertices."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .coloring import is_k_critical
from .graph import (
    Graph,
    GraphError,
    as_mask,
    bits,
    canonical_form,
    delete_edge,
    identify_vertices,
    mask_of,
    relabel,
    split_vertex,
    two_separations,
    unordered_splits,
)

# generated 4-Ore graphs reach n = 13 and beyond; they are sparse enough for the
# canonicaliser, so generation and recognition lift the general n <= 12 cap
ORE_CANONICAL_MAX_N = 40

K4 = Graph.complete(4)


@dataclass(frozen=True)
class Composition:
    """Result of an Ore-composition.

    ``edge_map`` sends every vertex of the edge-side to its label in ``graph``;
    ``split_map`` does the same for the split-side minus the split vertex.
    ``x`` and ``y`` are the merged vertices ``x = z1`` and ``y = z2``.
    """

    graph: Graph
    edge_map: dict[int, int]
    split_map: dict[int, int]
    x: int
    y: int


def ore_compose(
    g1: Graph,
    xy: tuple[int, int],
    g2: Graph,
    z: int,
    split: tuple[Iterable[int], Iterable[int]],
) -> Composition:
    """Delete ``xy`` from ``g1``, split ``z`` of ``g2`` by ``split``, merge ``x = z1``, ``y = z2``.

    Edge-side labels are kept; the remaining split-side vertices follow in order.
    """
    x, y = xy
    if not g1.has_edge(x, y):
        raise GraphError(f"({x}, {y}) is not an edge of the edge-side")
    if not 0 <= z < g2.n:
        raise GraphError(f"split vertex {z} out of range")
    p1, p2 = (as_mask(g2, part) for part in split)
    if not p1 or not p2:
        raise GraphError("both sides of a split need positive degree")
    if p1 & p2 or (p1 | p2) != g2.adj[z]:
        raise GraphError(f"split parts must partition N({z})")
    base = delete_edge(g1, x, y)
    n1 = g1.n
    split_map: dict[int, int] = {}
    nxt = n1
    for v in range(g2.n):
        if v != z:
            split_map[v] = nxt
            nxt += 1
    adj = list(base.adj) + [0] * (g2.n - 1)
    for v, new_v in split_map.items():
        row = 0
        for u in bits(g2.adj[v]):
            if u == z:
                row |= 1 << (x if p1 >> v & 1 else y)
            else:
                row |= 1 << split_map[u]
        adj[new_v] = row
    for u in bits(p1):
        adj[x] |= 1 << split_map[u]
    for u in bits(p2):
        adj[y] |= 1 << split_map[u]
    g = Graph(nxt, adj)
    return Composition(g, {v: v for v in range(n1)}, split_map, x, y)


def h7() -> Graph:
    """The Ore-composition of two copies of ``K4``.

    Vertex 0 is the unique vertex of degree four; ``{0, 1, 2, 3}`` is the
    edge-side, with ``0`` and ``1`` the merged ends of the replaced edge.
    """
    return ore_compose(K4, (0, 1), K4, 0, ((1, 2), (3,))).graph


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class OreCertificate:
    """How a graph is assembled from copies of ``K4`` by Ore-compositions.

    A leaf (``edge_side is None``) stands for ``K4`` on labels ``0..3``.  Labels
    inside a node refer to the replayed graphs of its children.
    """

    edge_side: OreCertificate | None = None
    xy: tuple[int, int] = (0, 0)
    split_side: OreCertificate | None = None
    z: int = 0
    split: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
    seed: int | None = field(default=None, compare=False)

    @property
    def is_leaf(self) -> bool:
        return self.edge_side is None

    def replay(self) -> Graph:
        return self._replay_composition().graph if not self.is_leaf else K4

    def _replay_composition(self) -> Composition:
        assert self.edge_side is not None and self.split_side is not None
        return ore_compose(self.edge_side.replay(), self.xy, self.split_side.replay(), self.z, self.split)

    def size(self) -> int:
        """Number of ``K4`` leaves."""
        if self.is_leaf:
            return 1
        assert self.edge_side is not None and self.split_side is not None
        return self.edge_side.size() + self.split_side.size()

    def to_json(self) -> dict:
        if self.is_leaf:
            out: dict = {"leaf": "K4"}
        else:
            assert self.edge_side is not None and self.split_side is not None
            out = {
                "edge_side": self.edge_side.to_json(),
                "xy": list(self.xy),
                "split_side": self.split_side.to_json(),
                "z": self.z,
                "split": [list(self.split[0]), list(self.split[1])],
            }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, data: dict) -> OreCertificate:
        seed = data.get("seed")
        if "leaf" in data:
            if data["leaf"] != "K4":
                raise GraphError(f"unknown certificate leaf {data['leaf']!r}")
            return cls(seed=seed)
        return cls(
            edge_side=cls.from_json(data["edge_side"]),
            xy=(int(data["xy"][0]), int(data["xy"][1])),
            split_side=cls.from_json(data["split_side"]),
            z=int(data["z"]),
            split=(tuple(data["split"][0]), tuple(data["split"][1])),
            seed=seed,
        )


LEAF = OreCertificate()


@dataclass(frozen=True)
class OreGraph:
    """A 4-Ore graph together with a certificate whose replay equals it exactly."""

    graph: Graph
    certificate: OreCertificate


# ---------------------------------------------------------------------------
# Generation

ComposeObserver = Callable[[OreGraph, OreGraph, Composition], None]


def _choices(g1: Graph, g2: Graph) -> Iterator[tuple[tuple[int, int], int, tuple[int, int]]]:
    for u, v in g1.edges():
        for xy in ((u, v), (v, u)):
            for z in range(g2.n):
                for split in unordered_splits(g2.adj[z]):
                    yield xy, z, split


def _node(a: OreGraph, b: OreGraph, xy: tuple[int, int], z: int, split: tuple[int, int], seed=None) -> OreCertificate:
    return OreCertificate(
        edge_side=a.certificate,
        xy=xy,
        split_side=b.certificate,
        z=z,
        split=(tuple(bits(split[0])), tuple(bits(split[1]))),
        seed=seed,
    )


def exhaustive_4_ore(max_n: int, observer: ComposeObserver | None = None) -> dict[int, list[OreGraph]]:
    """All 4-Ore graphs with at most ``max_n`` vertices, one per isomorphism class.

    Every composition over every choice of replaced edge, split vertex and split
    is performed; ``observer`` sees each one (duplicates included).
    """
    if max_n > 64:
        raise GraphError("max_n is limited to 64")
    levels: dict[int, list[OreGraph]] = {}
    if max_n < 4:
        return levels
    levels[4] = [OreGraph(K4, LEAF)]
    for n in range(5, max_n + 1):
        found: dict[bytes, OreGraph] = {}
        for a in sorted(levels):
            b = n + 1 - a
            if b not in levels:
                continue
            for side1 in levels[a]:
                for side2 in levels[b]:
                    for xy, z, split in _choices(side1.graph, side2.graph):
                        comp = ore_compose(side1.graph, xy, side2.graph, z, split)
                        if observer is not None:
                            observer(side1, side2, comp)
                        key = canonical_form(comp.graph, ORE_CANONICAL_MAX_N)
                        if key not in found:
                            found[key] = OreGraph(comp.graph, _node(side1, side2, xy, z, split))
        if found:
            levels[n] = list(found.values())
    return levels


def random_4_ore(max_n: int, count: int, seed: int) -> Iterator[OreGraph]:
    """``count`` certified 4-Ore graphs built from uniformly random composition choices.

    Pieces are drawn from a growing pool that starts at ``K4``; each sample's
    root certificate carries ``seed``.
    """
    rng = random.Random(seed)
    pool = [OreGraph(K4, LEAF)]
    for _ in range(count):
        firsts = [p for p in pool if p.graph.n + 3 <= max_n]
        if not firsts:
            yield OreGraph(K4, OreCertificate(seed=seed))
            continue
        a = rng.choice(firsts)
        seconds = [p for p in pool if a.graph.n + p.graph.n - 1 <= max_n]
        b = rng.choice(seconds)
        u, v = rng.choice(a.graph.edges())
        xy = (u, v) if rng.random() < 0.5 else (v, u)
        z = rng.randrange(b.graph.n)
        split = rng.choice(list(unordered_splits(b.graph.adj[z])))
        comp = ore_compose(a.graph, xy, b.graph, z, split)
        made = OreGraph(comp.graph, _node(a, b, xy, z, split, seed=seed))
        pool.append(OreGraph(made.graph, _node(a, b, xy, z, split)))
        yield made


def generate_4_ore(
    max_n: int,
    mode: str = "exhaustive",
    seed: int = 0,
    count: int = 10,
) -> Iterator[OreGraph]:
    """Stream 4-Ore graphs with their certificates (see :func:`exhaustive_4_ore`, :func:`random_4_ore`)."""
    if max_n > 64:
        raise GraphError("max_n is limited to 64")
    if mode == "exhaustive":
        levels = exhaustive_4_ore(max_n)
        for n in sorted(levels):
            yield from levels[n]
    elif mode == "random":
        yield from random_4_ore(max_n, count, seed)
    else:
        raise GraphError(f"unknown generation mode {mode!r}")


# ---------------------------------------------------------------------------
# Recognition


@dataclass(frozen=True)
class SeparationPieces:
    """The two graphs a 2-separation ``{x, y}`` yields.

    ``edge_side`` is ``A + xy`` and ``split_side`` is ``B / xy``; the maps send
    host labels into each piece (``x`` and ``y`` both go to ``z`` on the split-side).
    """

    x: int
    y: int
    edge_side: Graph
    edge_map: dict[int, int]
    split_side: Graph
    split_map: dict[int, int]
    z: int
    split: tuple[int, int]
    edge_vertices: int
    split_vertices: int


def separation_pieces(g: Graph, x: int, y: int, side_a: int) -> SeparationPieces | None:
    """``G[A] + xy`` and ``G[B] / xy`` for ``A = side_a + {x, y}``, ``B`` the rest plus ``{x, y}``.

    Returns ``None`` when this orientation cannot be an Ore-decomposition
    (``xy`` already an edge or ``x``, ``y`` sharing a neighbour in ``B``).
    """
    if g.has_edge(x, y):
        return None
    xy_mask = (1 << x) | (1 << y)
    a_mask = side_a | xy_mask
    b_mask = (g.full_mask & ~side_a) | xy_mask
    nx_b = g.adj[x] & b_mask
    ny_b = g.adj[y] & b_mask
    if nx_b & ny_b or not nx_b or not ny_b:
        return None
    ga, amap = g.induced(a_mask)
    adj = list(ga.adj)
    adj[amap[x]] |= 1 << amap[y]
    adj[amap[y]] |= 1 << amap[x]
    edge_side = Graph(ga.n, adj)
    gb, bmap = g.induced(b_mask)
    split_side, ident = identify_vertices(gb, [[bmap[x], bmap[y]]])
    smap = {v: ident[bmap[v]] for v in bits(b_mask)}
    z = smap[x]
    p1 = mask_of(smap[u] for u in bits(nx_b))
    p2 = mask_of(smap[u] for u in bits(ny_b))
    return SeparationPieces(x, y, edge_side, amap, split_side, smap, z, (p1, p2), a_mask, b_mask)


def _recognise(g: Graph) -> tuple[OreCertificate, dict[int, int]] | None:
    """Certificate plus a map from ``g``'s labels onto the replayed graph's labels."""
    if g.n == 4 and g.num_edges == 6:
        return LEAF, {v: v for v in range(4)}
    if not is_k_critical(g, 4):
        return None
    for (x, y), comps in two_separations(g):
        side = comps[0]
        other = g.full_mask & ~side & ~((1 << x) | (1 << y))
        for pieces in (separation_pieces(g, x, y, side), separation_pieces(g, x, y, other)):
            if pieces is None:
                continue
            if not (is_k_critical(pieces.edge_side, 4) and is_k_critical(pieces.split_side, 4)):
                continue
            left = _recognise(pieces.edge_side)
            if left is None:
                continue
            right = _recognise(pieces.split_side)
            if right is None:
                continue
            c1, m1 = left
            c2, m2 = right
            p1, p2 = pieces.split
            cert = OreCertificate(
                edge_side=c1,
                xy=(m1[pieces.edge_map[x]], m1[pieces.edge_map[y]]),
                split_side=c2,
                z=m2[pieces.z],
                split=(tuple(sorted(m2[u] for u in bits(p1))), tuple(sorted(m2[u] for u in bits(p2)))),
            )
            comp = cert._replay_composition()
            perm: dict[int, int] = {}
            for v in bits(pieces.edge_vertices):
                perm[v] = comp.edge_map[m1[pieces.edge_map[v]]]
            for v in bits(pieces.split_vertices & ~((1 << x) | (1 << y))):
                perm[v] = comp.split_map[m2[pieces.split_map[v]]]
            return cert, perm
    return None


def is_4_ore(g: Graph) -> OreCertificate | None:
    """A certificate that ``g`` is 4-Ore, or ``None``.

    Every 2-separation is tried in both orientations; an orientation is used
    only when both pieces are 4-critical.
    """
    found = _recognise(g)
    return None if found is None else found[0]


def recognise_with_map(g: Graph) -> tuple[OreCertificate, dict[int, int]] | None:
    """Like :func:`is_4_ore` but also returns ``perm`` with ``relabel(g, ...) == replay``."""
    return _recognise(g)


def replay_matches(g: Graph, cert: OreCertificate, perm: dict[int, int]) -> bool:
    """Whether ``cert.replay()`` equals ``g`` after relabelling ``v -> perm[v]``."""
    order = [0] * g.n
    for v, p in perm.items():
        order[p] = v
    return relabel(g, order) == cert.replay()


# ---------------------------------------------------------------------------
# Diamonds


@dataclass(frozen=True)
class Diamond:
    internal: tuple[int, int]
    ends: tuple[int, int]


def find_diamonds(g: Graph) -> list[Diamond]:
    """``K4 - e`` subgraphs whose two internal vertices have degree three in ``g``."""
    out = []
    for a, b in g.edges():
        if g.degree(a) != 3 or g.degree(b) != 3:
            continue
        common = g.adj[a] & g.adj[b]
        if common.bit_count() == 2 and g.adj[a] == common | (1 << b) and g.adj[b] == common | (1 << a):
            c, d = bits(common)
            out.append(Diamond((a, b), (c, d)))
    return out


def diamond_lemma_case(g: Graph) -> int | None:
    """Which alternative of the diamond structure lemma ``g`` satisfies (1, 2 or 3)."""
    key = canonical_form(g, ORE_CANONICAL_MAX_N)
    if key in (canonical_form(K4), canonical_form(h7())):
        return 1
    diamonds = find_diamonds(g)
    deg = g.degrees()
    for d in diamonds:
        c, e = d.ends
        if deg[c] == 4 and deg[e] == 4:
            return 2
    for d in diamonds:
        for hi, lo in (d.ends, d.ends[::-1]):
            if deg[hi] == 4 and deg[lo] == 3 and any(deg[w] == 4 for w in bits(g.adj[lo])):
                return 3
    return None


# ---------------------------------------------------------------------------
# Uncollapsible vertices and splits


def is_uncollapsible_vertex(g: Graph, v: int) -> bool:
    """No collapsible set of ``g`` avoids ``v``."""
    from .potential import find_collapsible

    if not is_k_critical(g, 4):
        raise GraphError("uncollapsibility is defined for 4-critical graphs")
    return find_collapsible(g, avoid=1 << v) is None


def is_uncollapsible_split(g: Graph, v: int, split: tuple[Iterable[int], Iterable[int]]) -> bool:
    """The graph obtained by splitting ``v`` as given contains no collapsible set.

    Collapsibility is evaluated in the split graph itself.
    """
    from .potential import find_collapsible

    part1, part2 = split
    g2, _, _ = split_vertex(g, v, part1, part2)
    return find_collapsible(g2, avoid=0, check_critical=False) is None


def splits_of(g: Graph, v: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    return [(tuple(bits(p1)), tuple(bits(p2))) for p1, p2 in unordered_splits(g.adj[v])]

