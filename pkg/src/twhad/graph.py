"""Immutable simple graphs, cyclic orders, generators and subdivisions.

Vertices are the integers ``0..n-1``.  Adjacency is stored as one bitmask
per vertex, which keeps the exponential searches elsewhere in the package
cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidArgument, ParseError


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """A finite simple graph on ``range(n)`` with value semantics."""

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidArgument("vertex count must be non-negative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidArgument(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.adj: tuple[int, ...] = tuple(adj)
        self._hash = None

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(masks)
        g.adj = tuple(masks)
        g._hash = None
        for v, m in enumerate(g.adj):
            if m >> v & 1:
                raise InvalidArgument(f"self-loop at {v}")
            for u in bits(m):
                if u >= g.n or not g.adj[u] >> v & 1:
                    raise InvalidArgument("adjacency masks are not symmetric")
        return g

    # -- queries --------------------------------------------------------
    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def neighborhood_mask(self, mask: int) -> int:
        """Open neighbourhood of a vertex set, as a mask."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def component_mask(self, v: int, within: int | None = None) -> int:
        """Vertices reachable from ``v`` inside ``within`` (default: all)."""
        if within is None:
            within = self.all_mask
        seen = 1 << v
        frontier = seen
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= self.adj[u]
            nxt &= within & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self, within: int | None = None) -> list[int]:
        if within is None:
            within = self.all_mask
        comps = []
        rest = within
        while rest:
            v = (rest & -rest).bit_length() - 1
            c = self.component_mask(v, rest)
            comps.append(c)
            rest &= ~c
        return comps

    def is_connected_set(self, mask: int) -> bool:
        if not mask:
            return False
        v = (mask & -mask).bit_length() - 1
        return self.component_mask(v, mask) == mask

    def is_connected(self) -> bool:
        return self.n == 0 or self.is_connected_set(self.all_mask)

    # -- derived graphs -------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled in increasing order of old index.

        Returns the subgraph and the list ``old_of_new``.
        """
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        edges = [(new_of[u], new_of[v]) for u, v in self.edges() if u in new_of and v in new_of]
        return Graph(len(old), edges), old

    def remove_vertices(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges()) + [tuple(e) for e in edges])

    def complement(self) -> "Graph":
        full = self.all_mask
        return Graph.from_masks([full & ~a & ~(1 << v) for v, a in enumerate(self.adj)])

    # -- value semantics ------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- text format ----------------------------------------------------
    def to_text(self) -> str:
        es = self.edges()
        lines = [f"{self.n} {len(es)}"] + [f"{u} {v}" for u, v in es]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise ParseError("graph header must be 'n m'")
        try:
            n, m = int(rows[0][0]), int(rows[0][1])
            body = [(int(a), int(b)) for a, b in (r for r in rows[1 : m + 1] if len(r) == 2)]
        except ValueError as exc:
            raise ParseError(f"non-integer token in graph file: {exc}") from None
        if n < 0 or len(body) != m or len(rows) - 1 < m:
            raise ParseError(f"expected {m} edge lines")
        for u, v in body:
            if not 0 <= u < v < n:
                raise ParseError(f"edge line '{u} {v}' must satisfy 0 <= u < v < n")
        if len(set(body)) != m:
            raise ParseError("parallel edge in graph file")
        return cls(n, body)


# ---------------------------------------------------------------------------
# small named graphs


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidArgument("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def empty_graph(n: int) -> Graph:
    return Graph(n)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridCoordMap:
    """Bijection between vertex indices and 1-based ``(row, col)`` pairs."""

    rows: int
    cols: int

    def index(self, row: int, col: int) -> int:
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise InvalidArgument(f"coordinate ({row}, {col}) outside grid")
        return (row - 1) * self.cols + (col - 1)

    def coord(self, v: int) -> tuple[int, int]:
        if not 0 <= v < self.rows * self.cols:
            raise InvalidArgument(f"vertex {v} outside grid")
        return v // self.cols + 1, v % self.cols + 1

    def __contains__(self, rc) -> bool:
        r, c = rc
        return 1 <= r <= self.rows and 1 <= c <= self.cols


def _check_dims(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise InvalidArgument("grid dimensions must be positive")


def make_grid(m: int, n: int) -> tuple[Graph, GridCoordMap]:
    """The (m x n)-grid with its coordinate map."""
    _check_dims(m, n)
    cm = GridCoordMap(m, n)
    edges = []
    for r in range(1, m + 1):
        for c in range(1, n + 1):
            if c < n:
                edges.append((cm.index(r, c), cm.index(r, c + 1)))
            if r < m:
                edges.append((cm.index(r, c), cm.index(r + 1, c)))
    return Graph(m * n, edges), cm


def make_strong_grid(m: int, n: int) -> tuple[Graph, GridCoordMap]:
    """Strong product of paths: king moves on an (m x n) board."""
    _check_dims(m, n)
    cm = GridCoordMap(m, n)
    edges = []
    for r in range(1, m + 1):
        for c in range(1, n + 1):
            for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
                if (r + dr, c + dc) in cm:
                    edges.append((cm.index(r, c), cm.index(r + dr, c + dc)))
    return Graph(m * n, edges), cm


def make_path_power(n: int, t: int) -> Graph:
    if n < 1 or t < 1:
        raise InvalidArgument("path power needs n >= 1 and t >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, min(n, i + t + 1))])


# ---------------------------------------------------------------------------
# subdivisions


class SubdividedGraph(Graph):
    """A subdivision that remembers where it came from.

    Vertices ``0..base.n-1`` are the original vertices; ``paths[(u, v)]``
    (``u < v``) lists the interior vertices of the path replacing ``uv``,
    ordered from ``u`` to ``v``.
    """

    __slots__ = ("base", "paths")

    @property
    def proper(self) -> bool:
        return all(len(p) >= 1 for p in self.paths.values())

    def interior_vertex(self, u: int, v: int) -> int:
        """The single subdivision vertex of ``uv`` in a 1-subdivision."""
        key = (u, v) if u < v else (v, u)
        p = self.paths[key]
        if len(p) != 1:
            raise InvalidArgument(f"edge {key} is not subdivided exactly once")
        return p[0]


def subdivide(g: Graph, lengths: Mapping[tuple[int, int], int] | int) -> SubdividedGraph:
    """Replace each edge ``uv`` by a path with ``lengths[uv]`` edges.

    ``lengths`` may be a single integer applied to every edge.
    """
    edges = g.edges()
    if isinstance(lengths, int):
        lengths = {e: lengths for e in edges}
    else:
        lengths = {((u, v) if u < v else (v, u)): ell for (u, v), ell in lengths.items()}
    nxt = g.n
    new_edges = []
    paths = {}
    for u, v in edges:
        if (u, v) not in lengths:
            raise InvalidArgument(f"no length given for edge ({u}, {v})")
        ell = lengths[(u, v)]
        if ell < 1:
            raise InvalidArgument(f"edge ({u}, {v}) has length {ell} < 1")
        interior = list(range(nxt, nxt + ell - 1))
        nxt += ell - 1
        chain = [u] + interior + [v]
        new_edges.extend(zip(chain, chain[1:]))
        paths[(u, v)] = tuple(interior)
    sg = SubdividedGraph(nxt, new_edges)
    sg.base = g
    sg.paths = paths
    return sg


def one_subdivision(g: Graph) -> SubdividedGraph:
    return subdivide(g, 2)


# ---------------------------------------------------------------------------
# cyclic orders


@dataclass(frozen=True)
class CyclicOrder:
    """Distinct labels read around a circle, stored from the minimum label."""

    elements: tuple

    def __init__(self, elements: Iterable):
        els = tuple(elements)
        if len(set(els)) != len(els):
            raise InvalidArgument("cyclic order labels must be distinct")
        if els:
            i = els.index(min(els))
            els = els[i:] + els[:i]
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(els)})

    def __len__(self) -> int:
        return len(self.elements)

    def position(self, x) -> int:
        try:
            return self._pos[x]
        except KeyError:
            raise InvalidArgument(f"label {x!r} not in cyclic order") from None

    def to_text(self) -> str:
        return " ".join(str(x) for x in self.elements) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CyclicOrder":
        try:
            return cls(int(tok) for tok in text.split())
        except ValueError as exc:
            raise ParseError(str(exc)) from None


def cyclic_between(c: CyclicOrder, a, b, x) -> bool:
    """True iff ``(a, b, x)`` is in the ternary relation of ``c``.

    That is, walking forward from ``a`` one meets ``b`` before ``x``.
    """
    if len({a, b, x}) != 3:
        raise InvalidArgument("cyclic_between needs three distinct labels")
    n = len(c)
    pa, pb, px = c.position(a), c.position(b), c.position(x)
    return (pb - pa) % n < (px - pa) % n


def chords_cross(c: CyclicOrder, e, f) -> bool:
    """Two independent chords ``{x, y}`` and ``{x', y'}`` cross in ``c``."""
    x, y = e
    x2, y2 = f
    if len({x, y, x2, y2}) != 4:
        raise InvalidArgument("chords must be independent")
    return cyclic_between(c, x, x2, y) != cyclic_between(c, x, y2, y)
