"""Induced grid minor or clique minor, from a grid with extra edges."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .decomposition import treewidth_reduced
from .errors import InvalidArgument, ResourceLimit, StructuralError
from .graph import Graph, GridCoordMap, bits, complete_graph, make_grid, make_strong_grid, to_mask
from .minors import InducedMinorModel, MinorModel, is_planar, require_valid

Coord = tuple[int, int]


@dataclass(frozen=True)
class DichotomyInput:
    """Host on ``[N] x [N]`` (``N = t(2k+1)``) containing every grid edge."""

    host: Graph
    k: int
    t: int

    def __post_init__(self):
        if self.k < 1 or self.t < 1:
            raise InvalidArgument("k and t must be positive")
        N = self.size
        if self.host.n != N * N:
            raise InvalidArgument(f"host must have {N * N} vertices for k={self.k}, t={self.t}")
        cm = self.coords
        for x in range(1, N + 1):
            for y in range(1, N + 1):
                v = cm.index(x, y)
                if x < N and not self.host.has_edge(v, cm.index(x + 1, y)):
                    raise InvalidArgument(f"grid edge ({x},{y})-({x + 1},{y}) missing")
                if y < N and not self.host.has_edge(v, cm.index(x, y + 1)):
                    raise InvalidArgument(f"grid edge ({x},{y})-({x},{y + 1}) missing")

    @property
    def size(self) -> int:
        return self.t * (2 * self.k + 1)

    @property
    def coords(self) -> GridCoordMap:
        return GridCoordMap(self.size, self.size)


@dataclass(frozen=True)
class DichotomyResult:
    kind: str  # "grid" or "clique"
    model: MinorModel
    block: Optional[Coord] = None
    jumps: dict = field(default_factory=dict)


def is_jump(cm: GridCoordMap, u: int, v: int) -> bool:
    (x1, y1), (x2, y2) = cm.coord(u), cm.coord(v)
    return abs(x1 - x2) >= 2 or abs(y1 - y2) >= 2


def _block_range(a: int, k: int, inner: bool) -> range:
    M = 2 * k + 1
    lo, hi = (a - 1) * M + 1, a * M
    return range(lo + 1, hi) if inner else range(lo, hi + 1)


def block_jumps(inp: DichotomyInput, a: int, b: int) -> list[tuple[int, int]]:
    """Jump edges with both ends in the inner block ``H_{a,b}``, sorted."""
    cm = inp.coords
    xs, ys = _block_range(a, inp.k, True), _block_range(b, inp.k, True)
    inner = to_mask(cm.index(x, y) for x in xs for y in ys)
    out = []
    for u in bits(inner):
        for v in bits(inp.host.adj[u] & inner):
            if u < v and is_jump(cm, u, v):
                out.append((u, v))
    return out


def _grid_model_in_block(inp: DichotomyInput, a: int, b: int) -> InducedMinorModel:
    k = inp.k
    cm = inp.coords
    M = 2 * k + 1
    ox, oy = (a - 1) * M, (b - 1) * M

    def inside(x, y):
        return 2 <= x <= M - 1 and 2 <= y <= M - 1

    sets = []
    pattern, pcm = make_grid(k, k)
    for p in range(k * k):
        i, j = pcm.coord(p)
        if (i + j) % 2 == 0:
            cells = [(2 * i, 2 * j - 1), (2 * i, 2 * j), (2 * i, 2 * j + 1)]
        else:
            cells = [(2 * i - 1, 2 * j), (2 * i, 2 * j), (2 * i + 1, 2 * j)]
        sets.append([cm.index(ox + x, oy + y) for x, y in cells if inside(x, y)])
    return InducedMinorModel(pattern, sets)


def _corner_sets(inp: DichotomyInput, a: int, b: int, jump: tuple[int, int]) -> dict[str, set[int]]:
    """Four disjoint connected sets of ``G_{a,b}``, one per corner.

    Diagonal corners are joined through the two crossing paths, and
    corners on a common side along the block boundary.
    """
    cm = inp.coords
    M = 2 * inp.k + 1
    ox, oy = (a - 1) * M, (b - 1) * M
    (x1, y1), (x2, y2) = [(x - ox, y - oy) for x, y in map(cm.coord, jump)]
    transpose = abs(x1 - x2) < 2
    if transpose:
        x1, y1, x2, y2 = y1, x1, y2, x2
    if x1 > x2:
        x1, y1, x2, y2 = x2, y2, x1, y1
    x = x1 + 1
    bl = {(1, y) for y in range(1, y1 + 1)} | {(xx, y1) for xx in range(1, x1 + 1)}
    bl |= {(1, y) for y in range(y1 + 1, M)} | {(xx, 1) for xx in range(2, x)}
    tr = {(xx, y2) for xx in range(x2, M + 1)} | {(M, y) for y in range(y2, M + 1)}
    tl = {(xx, M) for xx in range(1, x + 1)} | {(x, y) for y in range(2, M + 1)}
    tl |= {(xx, M) for xx in range(x + 1, M)}
    br = {(xx, 1) for xx in range(x, M + 1)} | {(M, y) for y in range(2, y2)}
    corners = {(1, 1): "BL", (M, M): "TR", (1, M): "TL", (M, 1): "BR"}
    out = {}
    for cells in (bl, tr, tl, br):
        if transpose:
            cells = {(y, xx) for xx, y in cells}
        name = next(corners[c] for c in corners if c in cells)
        out[name] = {cm.index(ox + xx, oy + y) for xx, y in cells}
    return out


def k2s_in_strong_grid(s: int) -> tuple[MinorModel, Graph, GridCoordMap]:
    """K_{2s} in ``P_2s x P_2s`` (strong product): sets ``Q_1..Q_s, R_1..R_s``."""
    if s < 1:
        raise InvalidArgument("s must be positive")
    host, cm = make_strong_grid(2 * s, 2 * s)
    Q, R = [], []
    for i in range(1, s + 1):
        q = [(x, 2 * i - x) for x in range(1, 2 * i)] + [(x, x - 2 * i + 1) for x in range(2 * i, 2 * s + 1)]
        r = [(x, x + 2 * s + 1 - 2 * i) for x in range(1, 2 * i)] + [
            (x, 2 * s + 2 * i - x) for x in range(2 * i, 2 * s + 1)
        ]
        Q.append({cm.index(*c) for c in q})
        R.append({cm.index(*c) for c in r})
    return MinorModel(complete_graph(2 * s), Q + R), host, cm


def grid_dichotomy(inp: DichotomyInput) -> DichotomyResult:
    """Either an induced (k x k)-grid model or a K_t model in ``inp.host``."""
    k, t = inp.k, inp.t
    jumps = {}
    for a in range(1, t + 1):
        for b in range(1, t + 1):
            jumps[(a, b)] = block_jumps(inp, a, b)
    for a in range(1, t + 1):
        for b in range(1, t + 1):
            if not jumps[(a, b)]:
                model = _grid_model_in_block(inp, a, b)
                require_valid(inp.host, model)
                return DichotomyResult("grid", model, (a, b), jumps)

    # every inner block has a jump: contract to the strong grid on [t+1]^2
    lattice: dict[Coord, set[int]] = {(p, q): set() for p in range(1, t + 2) for q in range(1, t + 2)}
    for a in range(1, t + 1):
        for b in range(1, t + 1):
            cs = _corner_sets(inp, a, b, jumps[(a, b)][0])
            lattice[(a, b)] |= cs["BL"]
            lattice[(a + 1, b)] |= cs["BR"]
            lattice[(a, b + 1)] |= cs["TL"]
            lattice[(a + 1, b + 1)] |= cs["TR"]
    s = t // 2 if t % 2 == 0 else (t + 1) // 2
    k2s, _, scm = k2s_in_strong_grid(s)
    sets = []
    for branch in k2s.branch_sets[:t]:
        sets.append(set().union(*(lattice[scm.coord(v)] for v in branch)))
    model = MinorModel(complete_graph(t), sets)
    require_valid(inp.host, model)
    return DichotomyResult("clique", model, None, jumps)


# ---------------------------------------------------------------------------
# planar induced subgraphs of large treewidth


def appendix_pattern(t: int) -> set[Coord]:
    """The coordinate set S = S1 u S2 u S3 u S4 inside ``[2t] x [4t-1]``."""
    rows, cols = 2 * t, 4 * t - 1
    S = set()
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            if j in (1, cols) or i % 2 == 1:
                S.add((i, j))
            elif i % 4 == 2 and j % 4 == 3:
                S.add((i, j))
            elif i % 4 == 0 and j % 4 == 1:
                S.add((i, j))
    return S


def extract_planar_high_tw(g: Graph, m: InducedMinorModel, t: int, max_t: int = 2) -> frozenset:
    """Vertex set of ``g`` inducing a planar graph of treewidth at least ``t``.

    ``m`` is an induced-minor model of the ``2t x (4t-1)`` grid.  Branch sets
    on the pattern S are shrunk vertex by vertex (lowest index first) while
    they stay connected and keep every required adjacency.
    """
    if t < 1:
        raise InvalidArgument("t must be positive")
    if t > max_t:
        raise ResourceLimit(f"extraction capped at t={max_t}")
    grid, cm = make_grid(2 * t, 4 * t - 1)
    if m.pattern != grid or not m.induced:
        raise InvalidArgument("need an induced-minor model of the 2t x (4t-1) grid")
    require_valid(g, m)
    S = sorted(appendix_pattern(t))
    X = {c: to_mask(m.branch_sets[cm.index(*c)]) for c in S}
    pairs = [(c, d) for c in S for d in S if c < d and abs(c[0] - d[0]) + abs(c[1] - d[1]) == 1]

    def ok(c: Coord, mask: int) -> bool:
        if not mask or not g.is_connected_set(mask):
            return False
        nb = g.neighborhood_mask(mask)
        return all(nb & X[d] for e, d in pairs if e == c) and all(nb & X[e] for e, d in pairs if d == c)

    for c in S:
        for v in bits(X[c]):
            trial = X[c] & ~(1 << v)
            if ok(c, trial):
                X[c] = trial
    out = frozenset(v for c in S for v in bits(X[c]))
    sub, _ = g.induced(sorted(out))
    if not is_planar(sub):
        raise StructuralError("extracted subgraph is not planar", witness=out)
    if treewidth_reduced(sub) < t:
        raise StructuralError("extracted subgraph has treewidth below t", witness=out)
    return out
