"""Local complementation and explicit vertex-minor sequences.

Every construction here returns a list of :class:`VmStep` on the labels of
its input graph.  Replaying the list with :func:`apply_vm_sequence` gives
the target graph together with the surviving labels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidArgument, ParseError, StructuralError, ValidationError
from .graph import Graph, SubdividedGraph, bits, one_subdivision, popcount, subdivide, to_mask
from .minors import InducedMinorModel, MinorModel, require_valid


@dataclass(frozen=True)
class VmStep:
    kind: str  # "lc" or "del"
    v: int

    def __post_init__(self):
        if self.kind not in ("lc", "del"):
            raise InvalidArgument(f"unknown step kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind} {self.v}"


def LC(v: int) -> VmStep:
    return VmStep("lc", v)


def Delete(v: int) -> VmStep:
    return VmStep("del", v)


def steps_to_text(steps: Sequence[VmStep]) -> str:
    return "".join(f"{s}\n" for s in steps)


def steps_from_text(text: str) -> list[VmStep]:
    out = []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2 or parts[0] not in ("lc", "del"):
            raise ParseError(f"bad step line {line!r}")
        try:
            out.append(VmStep(parts[0], int(parts[1])))
        except ValueError:
            raise ParseError(f"bad vertex in step line {line!r}") from None
    return out


def local_complement(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise InvalidArgument(f"vertex {v} not in graph")
    N = g.adj[v]
    adj = list(g.adj)
    for u in bits(N):
        adj[u] ^= N & ~(1 << u)
    return Graph.from_masks(adj)


def apply_vm_sequence(g: Graph, steps: Iterable[VmStep]) -> tuple[Graph, list[int]]:
    """Replay ``steps``; returns the result and, per new vertex, its old label."""
    adj = list(g.adj)
    alive = g.all_mask
    for s in steps:
        v = s.v
        if not (0 <= v < g.n) or not alive >> v & 1:
            raise InvalidArgument(f"step {s} refers to an unknown or deleted vertex")
        if s.kind == "lc":
            N = adj[v]
            for u in bits(N):
                adj[u] ^= N & ~(1 << u)
        else:
            for u in bits(adj[v]):
                adj[u] &= ~(1 << v)
            adj[v] = 0
            alive &= ~(1 << v)
    return Graph.from_masks(adj).induced(bits(alive))


def _isomorphic_under(result: Graph, labels: list[int], h: Graph, image: Mapping[int, int]) -> bool:
    """Is ``p -> image[p]`` (old labels) an isomorphism from ``h`` onto ``result``?"""
    pos = {old: i for i, old in enumerate(labels)}
    if result.n != h.n or sorted(image.values()) != sorted(labels):
        return False
    phi = [pos[image[p]] for p in range(h.n)]
    return all(result.has_edge(phi[p], phi[q]) == h.has_edge(p, q) for p in range(h.n) for q in range(p + 1, h.n))


# ---------------------------------------------------------------------------
# induced minors of 1-subdivisions


def _spanning_tree_edges(g: Graph, verts: frozenset) -> list[tuple[int, int]]:
    root = min(verts)
    seen = {root}
    dq = deque([root])
    out = []
    while dq:
        u = dq.popleft()
        for w in g.neighbors(u):
            if w in verts and w not in seen:
                seen.add(w)
                out.append((min(u, w), max(u, w)))
                dq.append(w)
    return out


def minor_to_induced_in_1subdivision(g: Graph, h: Graph, m: MinorModel) -> InducedMinorModel:
    """Turn a minor model of ``h`` in ``g`` into an induced one in the 1-subdivision.

    Each branch set absorbs the subdivision vertices of a spanning tree, and
    each pattern edge ``pq`` (``p < q``) gives the subdivision vertex of one
    host edge between the two sets to the set of ``p``.
    """
    if m.pattern != h:
        raise InvalidArgument("model pattern differs from h")
    require_valid(g, m)
    sg = one_subdivision(g)
    sets = []
    for b in m.branch_sets:
        tree = _spanning_tree_edges(g, b)
        sets.append(set(b) | {sg.interior_vertex(u, v) for u, v in tree})
    for p, q in h.edges():
        u, v = min(
            (min(a, c), max(a, c)) for a in m.branch_sets[p] for c in g.neighbors(a) if c in m.branch_sets[q]
        )
        sets[p].add(sg.interior_vertex(u, v))
    return InducedMinorModel(h, sets)


# ---------------------------------------------------------------------------
# vertex-minors of proper subdivisions


def minor_to_vm_sequence(gstar: SubdividedGraph, h: Graph, m: MinorModel) -> tuple[list[VmStep], dict[int, int]]:
    """Steps turning a proper subdivision of ``g`` into ``h``.

    ``m`` is a minor model of ``h`` in ``gstar.base``.  Returns the steps
    and the isomorphism ``pattern vertex -> surviving label of gstar``.
    """
    if not isinstance(gstar, SubdividedGraph):
        raise InvalidArgument("gstar must carry its subdivision correspondence")
    if not gstar.proper:
        raise InvalidArgument("gstar is not a proper subdivision")
    g = gstar.base
    if m.pattern != h:
        raise InvalidArgument("model pattern differs from h")
    require_valid(g, m)
    steps: list[VmStep] = []

    # shorten every subdivision path to a single vertex
    x: dict[tuple[int, int], int] = {}
    for e, interior in sorted(gstar.paths.items()):
        chain = list(interior)
        while len(chain) > 1:
            w = chain.pop(-2)
            steps += [LC(w), Delete(w)]
        x[e] = chain[0]

    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    owner = {v: p for p, b in enumerate(m.branch_sets) for v in b}
    sets = [set(b) for b in m.branch_sets]

    def key(a, b):
        return (a, b) if a < b else (b, a)

    while True:
        unused = sorted(v for v in adj if v not in owner)
        if unused:
            v = unused[0]
            for w in sorted(adj[v]):
                steps.append(Delete(x.pop(key(v, w))))
                adj[w].discard(v)
            steps.append(Delete(v))
            del adj[v]
            continue
        big = next((p for p, b in enumerate(sets) if len(b) >= 2), None)
        if big is None:
            break
        b = sets[big]
        a, c = min((u, w) for u in b for w in adj[u] if w in b and u < w)
        # contract ac onto a, removing c
        xac = x.pop((a, c))
        steps += [LC(c), LC(xac), Delete(c), Delete(xac)]
        for w in sorted(adj[c] - {a}):
            xcw = x.pop(key(c, w))
            adj[w].discard(c)
            if w in adj[a]:
                steps.append(Delete(xcw))
            else:
                adj[a].add(w)
                adj[w].add(a)
                x[key(a, w)] = xcw
        adj[a].discard(c)
        del adj[c]
        b.discard(c)
        del owner[c]

    image = {p: next(iter(b)) for p, b in enumerate(sets)}
    for p, q in h.edges():
        steps.append(LC(x[key(image[p], image[q])]))
    for e in sorted(x):
        steps.append(Delete(x[e]))

    result, labels = apply_vm_sequence(gstar, steps)
    if not _isomorphic_under(result, labels, h, image):
        raise StructuralError("replayed sequence does not produce the pattern", witness=steps)
    return steps, image


# ---------------------------------------------------------------------------
# subdivision recognition


def recognize_subdivision(s: Graph, branch: Mapping[int, int], base: Graph, proper: bool = True) -> bool:
    """Is ``s`` a subdivision of ``base`` with ``branch[u]`` the vertex for ``u``?

    Degree-2 vertices outside the branch image are suppressed; every other
    vertex must be a branch vertex.
    """
    if len(branch) != base.n or set(branch) != set(range(base.n)):
        return False
    image = {v: u for u, v in branch.items()}
    if len(image) != base.n or not all(0 <= v < s.n for v in image):
        return False
    for v in range(s.n):
        if v not in image and s.degree(v) != 2:
            return False
    found: list[tuple[int, int]] = []
    seen_interior: set[int] = set()
    for v in image:
        for w in s.neighbors(v):
            prev, cur, length = v, w, 1
            interior = []
            while cur not in image:
                interior.append(cur)
                nxt = [y for y in s.neighbors(cur) if y != prev]
                prev, cur = cur, nxt[0]
                length += 1
                if length > s.n:
                    return False
            if cur == v:
                return False
            if proper and length < 2:
                return False
            a, b = image[v], image[cur]
            if a < b:
                found.append((a, b))
                seen_interior.update(interior)
    if len(seen_interior) != s.n - base.n:
        return False
    return sorted(found) == base.edges()


# ---------------------------------------------------------------------------
# crossing elimination


@dataclass(frozen=True)
class MarkedDrawing:
    """A planarised drawing: crossing vertex ``c`` has rotation ``(c1, c2, c3, c4)``.

    The two edges meeting at ``c`` run ``c1-c-c3`` and ``c2-c-c4``.
    """

    graph: Graph
    rotations: Mapping[int, tuple[int, int, int, int]]

    def validate(self) -> None:
        for c, rot in self.rotations.items():
            if not 0 <= c < self.graph.n:
                raise ValidationError("range", f"crossing vertex {c} out of range", c)
            if self.graph.degree(c) != 4:
                raise ValidationError("degree", f"crossing vertex {c} has degree {self.graph.degree(c)}", c)
            if len(rot) != 4 or set(rot) != set(self.graph.neighbors(c)):
                raise ValidationError("rotation", f"rotation of {c} is not its neighbourhood", c)

    def to_text(self) -> str:
        lines = [self.graph.to_text().rstrip("\n")]
        for c in sorted(self.rotations):
            lines.append("x " + " ".join(str(v) for v in (c,) + tuple(self.rotations[c])))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MarkedDrawing":
        graph_lines, rots = [], {}
        for line in text.splitlines():
            parts = line.split()
            if parts and parts[0] == "x":
                if len(parts) != 6:
                    raise ParseError(f"bad crossing line {line!r}")
                try:
                    c, *rot = (int(p) for p in parts[1:])
                except ValueError:
                    raise ParseError(f"bad crossing line {line!r}") from None
                rots[c] = tuple(rot)
            else:
                graph_lines.append(line)
        d = cls(Graph.from_text("\n".join(graph_lines) + "\n"), rots)
        d.validate()
        return d


def smooth_crossings(d: MarkedDrawing) -> tuple[Graph, list[int]]:
    """The pre-drawing graph: each crossing replaced by ``c1c3`` and ``c2c4``.

    Returns the graph on the non-crossing vertices and their drawing labels.
    """
    d.validate()
    crossings = set(d.rotations)
    keep = [v for v in range(d.graph.n) if v not in crossings]
    new_of = {v: i for i, v in enumerate(keep)}
    edges = set()
    visited = set()
    for u in keep:
        for w in d.graph.neighbors(u):
            prev, cur = u, w
            while cur in crossings:
                rot = d.rotations[cur]
                i = rot.index(prev)
                prev, cur = cur, rot[(i + 2) % 4]
                visited.add(prev)
            if cur == u:
                raise StructuralError("an edge of the drawing closes into a loop", witness=u)
            e = (min(new_of[u], new_of[cur]), max(new_of[u], new_of[cur]))
            edges.add(e)
    # each edge is traced from both ends
    if 2 * len(edges) != sum(1 for u in keep for _ in d.graph.neighbors(u)):
        raise StructuralError("the drawing has parallel edges")
    return Graph(len(keep), sorted(edges)), keep


def eliminate_crossings_vm(d: MarkedDrawing) -> tuple[Graph, list[VmStep], Graph, dict[int, int]]:
    """Build the cycle-augmented 1-subdivision and its crossing-removal steps.

    Returns ``(D3, steps, G, branch)``: replaying ``steps`` on ``D3`` gives a
    proper subdivision of ``G`` whose vertex ``branch[u]`` stands for ``u``.
    """
    d.validate()
    G, keep = smooth_crossings(d)
    d2 = one_subdivision(d.graph)
    extra = []
    steps: list[VmStep] = []
    for c in sorted(d.rotations):
        y = [d2.interior_vertex(c, ci) for ci in d.rotations[c]]
        extra += [(y[i], y[(i + 1) % 4]) for i in range(4)]
        steps += [LC(c), Delete(c)]
    d3 = d2.add_edges(extra)
    branch = {i: v for i, v in enumerate(keep)}
    result, labels = apply_vm_sequence(d3, steps)
    pos = {old: i for i, old in enumerate(labels)}
    if not recognize_subdivision(result, {u: pos[v] for u, v in branch.items()}, G):
        raise StructuralError("crossing removal did not give a proper subdivision")
    return d3, steps, G, branch


# ---------------------------------------------------------------------------
# max-degree-3 patterns from 3-subdivisions


def _bfs_path(g: Graph, sources: int, targets: int, within: int) -> Optional[list[int]]:
    prev = {v: None for v in bits(sources & within)}
    dq = deque(sorted(prev))
    while dq:
        u = dq.popleft()
        if targets >> u & 1:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for w in g.neighbors(u):
            if within >> w & 1 and w not in prev:
                prev[w] = u
                dq.append(w)
    return None


def _prune(g: Graph, piece: int, terminals: int) -> int:
    """Lowest-index-first reduction to an inclusion-minimal connected set."""
    for v in bits(piece & ~terminals):
        if not piece >> v & 1:
            continue
        rest = piece & ~(1 << v)
        t0 = (terminals & -terminals).bit_length() - 1
        comp = g.component_mask(t0, rest)
        if terminals & ~comp == 0:
            piece = comp
    return piece


def maxdeg3_vm_from_3subdivision(g: Graph, h: Graph, m: InducedMinorModel) -> tuple[list[VmStep], dict[int, int]]:
    """Steps turning ``g`` into a proper subdivision of ``h``.

    ``m`` is an induced-minor model in ``g`` of ``subdivide(h, 4)``.  Returns
    the steps and the branch vertex (a label of ``g``) chosen for each vertex
    of ``h``.
    """
    if any(h.degree(v) > 3 for v in range(h.n)):
        raise InvalidArgument("h must have maximum degree 3")
    h3 = subdivide(h, 4)
    if m.pattern != h3:
        raise InvalidArgument("model pattern is not the 3-subdivision of h")
    if not m.induced:
        raise InvalidArgument("an induced-minor model is required")
    require_valid(g, m)
    Y = [to_mask(b) for b in m.branch_sets]
    Yu = Y[: h.n]

    # one induced path per edge, with a middle vertex a_uv
    a: dict[tuple[int, int], int] = {}
    keep = 0
    for u in range(h.n):
        keep |= Yu[u]
    for (u, v), (y1, y2, y3) in sorted(h3.paths.items()):
        union = Y[y1] | Y[y2] | Y[y3]
        src = g.neighborhood_mask(Yu[u]) & union
        dst = g.neighborhood_mask(Yu[v]) & union
        path = _bfs_path(g, src, dst, union)
        if path is None or len(path) < 3:
            raise StructuralError(f"no usable path for edge {u}{v}", witness=(u, v))
        a[(u, v)] = path[len(path) // 2]
        keep |= to_mask(path)

    amask = to_mask(a.values())
    final = 0
    branch: dict[int, int] = {}
    repairs: list[tuple[int, int]] = []
    for u in range(h.n):
        own = [a[e] for e in sorted(a) if u in e]
        anchor = min(bits(Yu[u]))
        Xu = g.component_mask(anchor, keep & ~amask)
        terminals = to_mask(own)
        if len(own) <= 1:
            terminals |= 1 << anchor
        piece = _prune(g, Xu | terminals, terminals)
        final |= piece
        inner = piece & ~amask
        if len(own) == 0:
            branch[u] = anchor
        elif len(own) == 1:
            branch[u] = anchor
        elif len(own) == 2:
            branch[u] = min(bits(inner))
        else:
            deg3 = [v for v in bits(inner) if popcount(g.adj[v] & piece) == 3]
            tri = [
                (x, y, z)
                for x in deg3
                for y in deg3
                for z in deg3
                if x < y < z and g.has_edge(x, y) and g.has_edge(y, z) and g.has_edge(x, z)
            ]
            if not tri:
                if len(deg3) != 1:
                    raise StructuralError(f"pruned piece at {u} has no recognised shape", witness=piece)
                branch[u] = deg3[0]
                continue
            chosen = None
            for t in tri[0]:
                outs = [x for x in bits(g.adj[t] & piece) if x not in tri[0] and not amask >> x & 1]
                if outs:
                    chosen = (t, outs[0])
                    break
            if chosen is None:
                raise StructuralError(f"line-graph piece at {u} has no repairable triangle vertex", witness=piece)
            repairs.append(chosen)
            branch[u] = chosen[1]

    steps = [Delete(v) for v in range(g.n) if not final >> v & 1]
    for t, _ in repairs:
        steps += [LC(t), Delete(t)]
    result, labels = apply_vm_sequence(g, steps)
    pos = {v: i for i, v in enumerate(labels)}
    if not recognize_subdivision(result, {u: pos[b] for u, b in branch.items()}, h):
        raise StructuralError("result is not a proper subdivision of h", witness=steps)
    return steps, branch
