"""Ordered graphs without unconnected crossings, and outer-string diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .decomposition import Separation, is_alpha_balanced, validate_separation
from .errors import InvalidArgument, OracleContractError, ParseError, StructuralError, ValidationError
from .graph import Graph, complete_graph
from .minors import Linkage, MinorModel, menger_linkage, require_valid

Edge = tuple[int, int]
Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class OrderedGraph:
    graph: Graph
    order: tuple[int, ...]

    def __init__(self, graph: Graph, order: Sequence[int]):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "order", tuple(order))
        if sorted(self.order) != list(range(graph.n)):
            raise InvalidArgument("order must be a permutation of the vertices")

    @property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def to_text(self) -> str:
        return self.graph.to_text() + "order " + " ".join(map(str, self.order)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OrderedGraph":
        lines = text.splitlines()
        order_lines = [ln for ln in lines if ln.split()[:1] == ["order"]]
        if len(order_lines) != 1:
            raise ParseError("ordered graph needs exactly one 'order' line")
        g = Graph.from_text("\n".join(ln for ln in lines if ln not in order_lines) + "\n")
        try:
            order = [int(x) for x in order_lines[0].split()[1:]]
        except ValueError:
            raise ParseError("order line must list integers") from None
        try:
            return cls(g, order)
        except InvalidArgument as exc:
            raise ParseError(str(exc)) from None


def _oriented_edges(og: OrderedGraph) -> list[Edge]:
    pos = og.position
    return sorted((u, v) if pos[u] < pos[v] else (v, u) for u, v in og.graph.edges())


def crossing_pairs(og: OrderedGraph):
    pos = og.position
    edges = _oriented_edges(og)
    for i, (u, v) in enumerate(edges):
        for x, y in edges[i + 1 :]:
            if len({u, v, x, y}) < 4:
                continue
            pu, pv, px, py = pos[u], pos[v], pos[x], pos[y]
            if pu < px < pv < py or px < pu < py < pv:
                yield (u, v), (x, y)


def crossing_pair_witness(og: OrderedGraph) -> Optional[tuple[Edge, Edge]]:
    return next(crossing_pairs(og), None)


def is_x_free(og: OrderedGraph) -> tuple[bool, Optional[tuple[Edge, Edge]]]:
    """``(True, None)`` or ``(False, crossing pair with no connecting edge)``."""
    g = og.graph
    for (u, v), (x, y) in crossing_pairs(og):
        if not (g.has_edge(u, x) or g.has_edge(u, y) or g.has_edge(v, x) or g.has_edge(v, y)):
            return False, ((u, v), (x, y))
    return True, None


# ---------------------------------------------------------------------------
# separator or clique minor


@dataclass(frozen=True)
class SeparatorResult:
    kind: str  # "separation" or "clique"
    separation: Optional[Separation] = None
    model: Optional[MinorModel] = None
    route: str = ""
    linkages: tuple = field(default=(), compare=False)


def quartile_intervals(og: OrderedGraph, X: Sequence[int], parts: int = 4) -> list[frozenset]:
    """Split the order into intervals, each closing right after an equal share of ``X``."""
    pos = og.position
    xs = sorted(X, key=pos.__getitem__)
    share = len(xs) // parts
    cuts = [pos[xs[share * j - 1]] for j in range(1, parts)]
    bounds = [-1] + cuts + [len(og.order) - 1]
    return [frozenset(og.order[bounds[j] + 1 : bounds[j + 1] + 1]) for j in range(parts)]


def _groups_by_second_vertex(L: Linkage, intervals: list[frozenset]) -> tuple[list, dict[int, list]]:
    short, groups = [], {}
    for p in sorted(L.paths, key=lambda p: min(p)):
        if len(p) == 2:
            short.append(p)
        elif len(p) > 2:
            j = next(i for i, I in enumerate(intervals) if p[1] in I)
            groups.setdefault(j, []).append(p)
    return short, groups


def _pairwise_adjacent(g: Graph, paths: list) -> bool:
    for i, p in enumerate(paths):
        nb = set()
        for v in p:
            nb.update(g.neighbors(v))
        if any(not nb & set(q) for q in paths[i + 1 :]):
            return False
    return True


def xfree_separator_or_clique(og: OrderedGraph, X: Sequence[int], t: int) -> SeparatorResult:
    """A 3/4-balanced separation for ``X`` of order below ``3t``, or a K_{t+1} model."""
    if t < 1:
        raise InvalidArgument("t must be positive")
    X = sorted(set(X))
    if len(X) != 12 * t:
        raise InvalidArgument(f"|X| must be 12t = {12 * t}, got {len(X)}")
    if any(not 0 <= v < og.graph.n for v in X):
        raise InvalidArgument("X must be a set of vertices")
    ok, bad = is_x_free(og)
    if not ok:
        raise ValidationError("not-x-free", f"edges {bad[0]} and {bad[1]} cross without a connecting edge", bad)
    g = og.graph
    alpha = Fraction(3, 4)
    I = quartile_intervals(og, X)
    links = []
    for a, b in ((0, 2), (1, 3)):
        L, sep = menger_linkage(g, I[a], I[b])
        if sep.order < 3 * t:
            validate_separation(g, sep)
            if not is_alpha_balanced(g, sep, X, alpha):
                raise OracleContractError("Menger cut is not 3/4-balanced")
            return SeparatorResult("separation", separation=sep, route=f"menger-I{a + 1}-I{b + 1}")
        links.append(L)

    (s1, g1), (s2, g2) = (_groups_by_second_vertex(L, I) for L in links)
    if len(s1) >= t and len(s2) >= t:
        P, Q = s1[:t], s2[:t]
        sets = [set(P[i]) | set(Q[i]) for i in range(t - 1)] + [set(P[t - 1]), set(Q[t - 1])]
        model = MinorModel(complete_graph(t + 1), sets)
        require_valid(g, model)
        return SeparatorResult("clique", model=model, route="crossing-edges", linkages=tuple(links))
    for groups in (g1, g2):
        for j in sorted(groups):
            paths = groups[j]
            if len(paths) >= t + 1 and _pairwise_adjacent(g, paths[: t + 1]):
                model = MinorModel(complete_graph(t + 1), [set(p) for p in paths[: t + 1]])
                require_valid(g, model)
                return SeparatorResult("clique", model=model, route=f"adjacent-paths-I{j + 1}", linkages=tuple(links))
    raise StructuralError("neither a small cut nor a clique minor was found", witness=links)


# ---------------------------------------------------------------------------
# outer-string diagrams


def _orient(a: Point, b: Point, c: Point) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ``ab`` and ``cd`` share a point (exact)."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and _on_segment(a, b, c))
        or (o2 == 0 and _on_segment(a, b, d))
        or (o3 == 0 and _on_segment(c, d, a))
        or (o4 == 0 and _on_segment(c, d, b))
    )


@dataclass(frozen=True)
class StringDiagram:
    """Polylines in the closed unit disk, each rooted at its first point."""

    strings: tuple[tuple[Point, ...], ...]

    def __init__(self, strings: Sequence[Sequence[tuple]]):
        conv = tuple(tuple((Fraction(x), Fraction(y)) for x, y in s) for s in strings)
        object.__setattr__(self, "strings", conv)
        self.validate()

    def validate(self) -> None:
        roots = set()
        for i, s in enumerate(self.strings):
            if len(s) < 2:
                raise ValidationError("short-string", f"string {i} needs a root and at least one more point", i)
            rx, ry = s[0]
            if rx * rx + ry * ry != 1:
                raise ValidationError("root", f"root of string {i} is not on the unit circle", i)
            if s[0] in roots:
                raise ValidationError("coincident-roots", f"string {i} shares its root", i)
            roots.add(s[0])
            for x, y in s[1:]:
                if x * x + y * y >= 1:
                    raise ValidationError("outside", f"string {i} leaves the open disk", i)

    def to_text(self) -> str:
        lines = []
        for i, s in enumerate(self.strings):
            pts = " ".join(f"{x},{y}" for x, y in s)
            lines.append(f"string {i} {pts}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StringDiagram":
        strings = {}
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] != "string" or len(parts) < 3:
                raise ParseError(f"bad string line {line!r}")
            pts = []
            try:
                sid = int(parts[1])
                for tok in parts[2:]:
                    x, y = tok.split(",")
                    pts.append((Fraction(x), Fraction(y)))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad string line {line!r}") from None
            strings[sid] = pts
        if sorted(strings) != list(range(len(strings))):
            raise ParseError("string ids must be 0..n-1")
        try:
            return cls([strings[i] for i in range(len(strings))])
        except ValidationError as exc:
            raise ParseError(str(exc)) from None


def _angle_key(p: Point):
    """Sort key increasing with the angle of ``p`` in ``[0, 2pi)``."""
    x, y = p
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    # within a half-plane compare by cotangent, decreasing with angle
    if y == 0:
        return (half, 0, Fraction(0))
    return (half, 1, -x / y)


def outer_string_graph(d: StringDiagram) -> OrderedGraph:
    """Intersection graph ordered clockwise by root, from the lexicographically least root."""
    n = len(d.strings)
    segs = [list(zip(s, s[1:])) for s in d.strings]
    boxes = []
    for s in d.strings:
        xs = [p[0] for p in s]
        ys = [p[1] for p in s]
        boxes.append((min(xs), max(xs), min(ys), max(ys)))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = boxes[i], boxes[j]
            if bi[1] < bj[0] or bj[1] < bi[0] or bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            if any(segments_intersect(a, b, c, e) for a, b in segs[i] for c, e in segs[j]):
                edges.append((i, j))
    roots = [s[0] for s in d.strings]
    ccw = sorted(range(n), key=lambda i: _angle_key(roots[i]))
    cw = ccw[::-1]
    start = min(range(n), key=lambda i: roots[i]) if n else 0
    if n:
        k = cw.index(start)
        cw = cw[k:] + cw[:k]
    return OrderedGraph(Graph(n, edges), cw)
