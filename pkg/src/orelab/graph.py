"""Simple undirected graphs on bitrows, surgery, graph6 I/O and canonical forms.

Vertices are the integers ``0..n-1``.  Each vertex owns an adjacency bitrow
(an ``int`` whose bit ``u`` is set iff ``u`` is a neighbour), so neighbourhood
and subset arithmetic are plain integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64
GRAPH6_MAX_N = 62
CANONICAL_MAX_N = 12


class GraphError(ValueError):
    """Base class for argument errors raised by graph operations."""


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class SizeLimitError(GraphError):
    pass


class LoopError(GraphError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class VertexSet:
    """A subset of the vertices of a graph with ``n`` vertices."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise GraphError(f"vertex set {self.mask:#x} exceeds 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> VertexSet:
        vs = list(vertices)
        for v in vs:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range 0..{n - 1}")
        return cls(n, mask_of(vs))

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.mask >> v & 1)

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self)})"


def as_mask(g: Graph, r: VertexSet | Iterable[int] | int) -> int:
    """Coerce ``r`` to a bitmask over ``V(g)``, rejecting foreign vertex sets."""
    if isinstance(r, VertexSet):
        if r.n != g.n:
            raise GraphError(f"vertex set over {r.n} vertices used with a graph on {g.n}")
        return r.mask
    if isinstance(r, int):
        if r < 0 or r >> g.n:
            raise GraphError(f"mask {r:#x} exceeds 0..{g.n - 1}")
        return r
    return VertexSet.of(g.n, r).mask


class Graph:
    """Immutable simple graph.  ``adj[v]`` is the neighbour bitrow of ``v``."""

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if not 0 <= n <= MAX_VERTICES:
            raise SizeLimitError(f"graphs are limited to {MAX_VERTICES} vertices, got {n}")
        adj = tuple(adj)
        if len(adj) != n:
            raise GraphError("adjacency length does not match n")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise GraphError(f"vertex {v} has a neighbour outside 0..{n - 1}")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
        self.n = n
        self.adj = adj
        self._hash = hash((n, adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise LoopError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, [full & ~(1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def wheel(cls, rim: int) -> Graph:
        """Cycle ``0..rim-1`` plus hub vertex ``rim`` adjacent to every rim vertex."""
        edges = [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]
        return cls.from_edges(rim + 1, edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.n <= GRAPH6_MAX_N:
            return f"Graph({emit_graph6(self)!r})"
        return f"Graph(n={self.n}, m={self.num_edges})"

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edges_within(self, mask: int) -> int:
        return sum((self.adj[v] & mask).bit_count() for v in bits(mask)) // 2

    def induced(self, mask: int) -> tuple[Graph, dict[int, int]]:
        """Induced subgraph on ``mask``; labels are compressed preserving order."""
        keep = list(bits(mask))
        pos = {v: i for i, v in enumerate(keep)}
        adj = []
        for v in keep:
            row = 0
            for u in bits(self.adj[v] & mask):
                row |= 1 << pos[u]
            adj.append(row)
        return Graph(len(keep), adj), pos

    def is_connected(self) -> bool:
        return self.n == 0 or component_of(self, 0, self.full_mask) == self.full_mask

    def components(self, mask: int | None = None) -> list[int]:
        """Connected components of ``G[mask]`` as bitmasks, ordered by least vertex."""
        rest = self.full_mask if mask is None else mask
        comps = []
        while rest:
            v = (rest & -rest).bit_length() - 1
            comp = component_of(self, v, rest)
            comps.append(comp)
            rest &= ~comp
        return comps


def component_of(g: Graph, v: int, within: int) -> int:
    seen = 1 << v
    frontier = seen
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= g.adj[u]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# graph6


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 line (short form, ``n <= 62``)."""
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    for i, c in enumerate(data):
        if not 63 <= c <= 126:
            raise Graph6Error(f"character {c!r} outside 63..126", i)
    n = data[0] - 63
    if n == 63:
        raise Graph6Error("long-form header (n > 62) is not supported", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[1:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes for n={n}, got {len(body)}", 1 + min(len(body), nbytes))
    stream = 0
    for c in body:
        stream = (stream << 6) | (c - 63)
    pad = 6 * nbytes - nbits
    if stream & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", len(data) - 1)
    stream >>= pad
    adj = [0] * n
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if stream >> k & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k -= 1
    return Graph(n, adj)


def emit_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no trailing newline)."""
    n = g.n
    if n > GRAPH6_MAX_N:
        raise SizeLimitError(f"graph6 short form supports n <= {GRAPH6_MAX_N}, got {n}")
    out = [chr(n + 63)]
    acc = 0
    nacc = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nacc += 1
            if nacc == 6:
                out.append(chr(acc + 63))
                acc = nacc = 0
    if nacc:
        out.append(chr((acc << (6 - nacc)) + 63))
    return "".join(out)


# ---------------------------------------------------------------------------
# Degree statistics and derived subgraphs


def ore_degree(g: Graph) -> int:
    """Maximum of ``d(u) + d(v)`` over the edges ``uv``."""
    deg = g.degrees()
    best = -1
    for u in range(g.n):
        for v in bits(g.adj[u]):
            if deg[u] + deg[v] > best:
                best = deg[u] + deg[v]
    if best < 0:
        raise GraphError("Ore-degree is undefined for an edgeless graph")
    return best


def low_degree_mask(g: Graph, bound: int = 3) -> int:
    return mask_of(v for v in range(g.n) if g.adj[v].bit_count() <= bound)


def d3_subgraph(g: Graph) -> tuple[Graph, VertexSet]:
    """The subgraph induced by the vertices of degree at most three."""
    m = low_degree_mask(g)
    sub, _ = g.induced(m)
    return sub, VertexSet(g.n, m)


def boundary(g: Graph, r: VertexSet | Iterable[int] | int) -> VertexSet:
    """Members of ``r`` with at least one neighbour outside ``r``."""
    m = as_mask(g, r)
    if m == g.full_mask:
        raise GraphError("the boundary is only defined for proper subsets")
    return VertexSet(g.n, boundary_mask(g, m))


def boundary_mask(g: Graph, m: int) -> int:
    out = ~m & g.full_mask
    return mask_of(v for v in bits(m) if g.adj[v] & out)


# ---------------------------------------------------------------------------
# Independence number


def _clique_cover_bound(adj: Sequence[int], cand: int) -> int:
    """Number of cliques in a greedy clique cover of ``cand``; bounds alpha from above."""
    count = 0
    while cand:
        v = (cand & -cand).bit_length() - 1
        clique = 1 << v
        common = adj[v] & cand
        while common:
            u = (common & -common).bit_length() - 1
            clique |= 1 << u
            common &= adj[u]
        cand &= ~clique
        count += 1
    return count


def independence_number_mask(adj: Sequence[int], cand: int) -> int:
    """Exact alpha of the subgraph induced by ``cand``."""
    best = 0

    def grow(cand: int, size: int) -> None:
        nonlocal best
        # vertices of degree <= 1 inside cand are always safe to take
        while cand:
            forced = 0
            for v in bits(cand):
                if (adj[v] & cand).bit_count() <= 1:
                    forced = v + 1
                    break
            if not forced:
                break
            v = forced - 1
            size += 1
            cand &= ~(adj[v] | (1 << v))
        if not cand:
            if size > best:
                best = size
            return
        if size + _clique_cover_bound(adj, cand) <= best:
            return
        pivot = max(bits(cand), key=lambda v: (adj[v] & cand).bit_count())
        grow(cand & ~(adj[pivot] | (1 << pivot)), size + 1)
        grow(cand & ~(1 << pivot), size)

    grow(cand, 0)
    return best


def independence_number(g: Graph, within: VertexSet | Iterable[int] | int | None = None) -> int:
    """Exact independence number of ``g`` (or of ``g[within]``) by branch and bound."""
    cand = g.full_mask if within is None else as_mask(g, within)
    return independence_number_mask(g.adj, cand)


def maximum_independent_sets(g: Graph, within: int | None = None) -> list[int]:
    """Every maximum independent set of ``g[within]`` as a bitmask."""
    cand = g.full_mask if within is None else within
    alpha = independence_number_mask(g.adj, cand)
    found: list[int] = []

    def walk(cand: int, chosen: int, size: int) -> None:
        if size + _clique_cover_bound(g.adj, cand) < alpha:
            return
        if not cand:
            if size == alpha:
                found.append(chosen)
            return
        v = (cand & -cand).bit_length() - 1
        walk(cand & ~(g.adj[v] | (1 << v)), chosen | (1 << v), size + 1)
        walk(cand & ~(1 << v), chosen, size)

    walk(cand, 0, 0)
    return found


# ---------------------------------------------------------------------------
# Surgery


def delete_edge(g: Graph, u: int, v: int) -> Graph:
    if not g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is not an edge")
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(g.n, adj)


def add_edge(g: Graph, u: int, v: int) -> Graph:
    if u == v:
        raise LoopError(f"cannot add a loop at {u}")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError(f"edge ({u}, {v}) out of range")
    if g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is already an edge")
    adj = list(g.adj)
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    return Graph(g.n, adj)


def delete_vertices(g: Graph, s: VertexSet | Iterable[int] | int) -> tuple[Graph, dict[int, int]]:
    """Remove ``s``; the map sends each surviving old label to its new label."""
    m = as_mask(g, s)
    return g.induced(g.full_mask & ~m)


def identify_vertices(
    g: Graph,
    parts: Iterable[Iterable[int]],
    allow_internal_edges: bool = False,
) -> tuple[Graph, dict[int, int]]:
    """Merge each part into a single vertex and drop parallel edges.

    New labels follow the order of each class's least member.  Merging two
    adjacent vertices would create a loop and raises :class:`LoopError` unless
    ``allow_internal_edges`` is set, in which case such edges are dropped.
    """
    owner = list(range(g.n))
    used = 0
    for part in parts:
        members = sorted(part)
        if not members:
            raise GraphError("cannot identify an empty part")
        pm = mask_of(members)
        if pm & used:
            raise GraphError("parts of an identification must be disjoint")
        used |= pm
        if not allow_internal_edges:
            for v in members:
                if g.adj[v] & pm:
                    u = next(bits(g.adj[v] & pm))
                    raise LoopError(f"identifying adjacent vertices {v} and {u}")
        for v in members:
            owner[v] = members[0]
    reps = sorted(set(owner))
    new = {r: i for i, r in enumerate(reps)}
    relabel = {v: new[owner[v]] for v in range(g.n)}
    adj = [0] * len(reps)
    for v in range(g.n):
        a = relabel[v]
        for u in bits(g.adj[v]):
            b = relabel[u]
            if a != b:
                adj[a] |= 1 << b
    return Graph(len(reps), adj), relabel


def split_vertex(
    g: Graph, z: int, part1: Iterable[int], part2: Iterable[int]
) -> tuple[Graph, int, int]:
    """Split ``z`` into nonadjacent ``z1`` (keeps label ``z``) and ``z2`` (new label ``n``)."""
    p1, p2 = as_mask(g, part1), as_mask(g, part2)
    if not p1 or not p2:
        raise GraphError("both sides of a split need positive degree")
    if p1 & p2 or (p1 | p2) != g.adj[z]:
        raise GraphError(f"split parts must partition N({z})")
    n = g.n
    adj = list(g.adj) + [p2]
    adj[z] = p1
    for u in bits(p2):
        adj[u] = (adj[u] & ~(1 << z)) | (1 << n)
    return Graph(n + 1, adj), z, n


def unordered_splits(neigh: int) -> Iterator[tuple[int, int]]:
    """All partitions of ``neigh`` into two nonempty parts, each listed once.

    The part holding the least neighbour comes first.
    """
    members = list(bits(neigh))
    if len(members) < 2:
        return
    first, rest = members[0], members[1:]
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            p1 = (1 << first) | mask_of(extra)
            yield p1, neigh & ~p1


def two_separations(g: Graph) -> list[tuple[tuple[int, int], list[int]]]:
    """Every pair ``{x, y}`` whose deletion disconnects ``g``, with the components left."""
    out = []
    full = g.full_mask
    for x in range(g.n):
        for y in range(x + 1, g.n):
            rest = full & ~((1 << x) | (1 << y))
            comps = g.components(rest)
            if len(comps) > 1:
                out.append(((x, y), comps))
    return out


# ---------------------------------------------------------------------------
# Canonical labelling


def _refine(adj: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition given as a list of bitmasks."""
    changed = True
    while changed:
        changed = False
        out: list[int] = []
        for cell in cells:
            if cell & (cell - 1) == 0:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], int] = {}
            for v in bits(cell):
                sig = tuple((adj[v] & c).bit_count() for c in cells)
                groups[sig] = groups.get(sig, 0) | (1 << v)
            if len(groups) == 1:
                out.append(cell)
            else:
                changed = True
                out.extend(groups[s] for s in sorted(groups))
        cells = out
    return cells


def _leaf_code(adj: Sequence[int], order: list[int]) -> int:
    code = 0
    for j in range(1, len(order)):
        row = adj[order[j]]
        for i in range(j):
            code = (code << 1) | (row >> order[i] & 1)
    return code


def canonical_labeling(g: Graph, max_n: int = CANONICAL_MAX_N) -> list[int]:
    """A vertex order ``order`` such that relabelling ``order[i] -> i`` is canonical."""
    if g.n > max_n:
        raise SizeLimitError(
            f"built-in canonicalisation is limited to n <= {max_n}; feed pre-deduplicated graph6 instead"
        )
    adj = g.adj
    n = g.n
    if n == 0:
        return []
    by_deg: dict[int, int] = {}
    for v in range(n):
        d = adj[v].bit_count()
        by_deg[d] = by_deg.get(d, 0) | (1 << v)
    start = _refine(adj, [by_deg[d] for d in sorted(by_deg)])
    best_code = -1
    best_order: list[int] = []

    def search(cells: list[int]) -> None:
        nonlocal best_code, best_order
        idx = next((i for i, c in enumerate(cells) if c & (c - 1)), -1)
        if idx < 0:
            order = [c.bit_length() - 1 for c in cells]
            code = _leaf_code(adj, order)
            if code > best_code:
                best_code, best_order = code, order
            return
        cell = cells[idx]
        tried: list[int] = []
        for v in bits(cell):
            # a twin of an already tried vertex gives an automorphic branch
            if any((adj[v] & ~(1 << t)) == (adj[t] & ~(1 << v)) for t in tried):
                continue
            tried.append(v)
            branch = cells[:idx] + [1 << v, cell & ~(1 << v)] + cells[idx + 1:]
            search(_refine(adj, branch))

    search(start)
    return best_order


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """The graph whose vertex ``i`` is ``g``'s vertex ``order[i]``."""
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * g.n
    for i, v in enumerate(order):
        row = 0
        for u in bits(g.adj[v]):
            row |= 1 << pos[u]
        adj[i] = row
    return Graph(g.n, adj)


def canonical_graph(g: Graph, max_n: int = CANONICAL_MAX_N) -> Graph:
    return relabel(g, canonical_labeling(g, max_n))


def canonical_form(g: Graph, max_n: int = CANONICAL_MAX_N) -> bytes:
    """Byte string equal for two graphs exactly when they are isomorphic."""
    return emit_graph6(canonical_graph(g, max_n)).encode("ascii")
