"""Tree-decompositions, separations and exact treewidth.

The centrepiece is :func:`td_from_separator_oracle`, which turns a supply
of small balanced separations for fixed-size vertex sets into a
tree-decomposition of width at most ``q + k - 1`` by the usual recursive
splitting argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional

from .errors import (
    InvalidArgument,
    NoSeparatorError,
    OracleContractError,
    ParseError,
    ResourceLimit,
    ValidationError,
)
from .graph import Graph, bits, popcount, to_mask

TREEWIDTH_CAP = 20
SEPARATOR_CAP = 16


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class TreeDecomposition:
    """A tree on nodes ``0..len(bags)-1`` and a bag per node."""

    tree: Graph
    bags: tuple[frozenset, ...]

    def __post_init__(self):
        if self.tree.n != len(self.bags):
            raise InvalidArgument("one bag per tree node required")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_text(self, n: int) -> str:
        lines = [f"td {len(self.bags)} {self.width + 1} {n}"]
        for i, bag in enumerate(self.bags):
            lines.append(" ".join(["b", str(i + 1)] + [str(v) for v in sorted(bag)]))
        for i, j in self.tree.edges():
            lines.append(f"t {i + 1} {j + 1}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["TreeDecomposition", int]:
        """Parse the text format; returns the decomposition and declared ``n``."""
        header = None
        bags: dict[int, frozenset] = {}
        edges = []
        try:
            for line in text.splitlines():
                parts = line.split()
                if not parts or parts[0] == "c":
                    continue
                if parts[0] == "td":
                    header = tuple(int(p) for p in parts[1:4])
                elif parts[0] == "b":
                    bags[int(parts[1])] = frozenset(int(p) for p in parts[2:])
                elif parts[0] == "t":
                    edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
                else:
                    raise ParseError(f"unknown line type {parts[0]!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed tree-decomposition line: {exc}") from None
        if header is None or len(header) != 3:
            raise ParseError("missing 'td <#bags> <width+1> <n>' header")
        nb, _, n = header
        if sorted(bags) != list(range(1, nb + 1)):
            raise ParseError("bag ids must be 1..#bags")
        try:
            tree = Graph(nb, edges)
        except InvalidArgument as exc:
            raise ParseError(str(exc)) from None
        return cls(tree, tuple(bags[i] for i in range(1, nb + 1))), n


@dataclass(frozen=True)
class Separation:
    A: frozenset
    B: frozenset

    def __init__(self, A: Iterable[int], B: Iterable[int]):
        object.__setattr__(self, "A", frozenset(A))
        object.__setattr__(self, "B", frozenset(B))

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    @property
    def separator(self) -> frozenset:
        return self.A & self.B

    def to_text(self) -> str:
        return (
            "A " + " ".join(map(str, sorted(self.A))) + "\n"
            "B " + " ".join(map(str, sorted(self.B))) + "\n"
        )

    @classmethod
    def from_text(cls, text: str) -> "Separation":
        sides = {}
        for line in text.splitlines():
            parts = line.split()
            if parts and parts[0] in ("A", "B"):
                try:
                    sides[parts[0]] = [int(p) for p in parts[1:]]
                except ValueError as exc:
                    raise ParseError(str(exc)) from None
        if set(sides) != {"A", "B"}:
            raise ParseError("separation file needs an 'A' line and a 'B' line")
        return cls(sides["A"], sides["B"])


@dataclass(frozen=True)
class BalanceSpec:
    """Parameters of the separator-to-decomposition recursion."""

    c: int
    k: int
    q: int
    X: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.c < 2 or self.k < 1:
            raise InvalidArgument("need c >= 2 and k >= 1")
        if self.q < self.c * self.k + 1:
            raise InvalidArgument(f"need q >= c*k + 1 = {self.c * self.k + 1}, got q={self.q}")
        object.__setattr__(self, "X", frozenset(self.X))

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.c - 1, self.c)


# ---------------------------------------------------------------------------
# validation


def td_validate(g: Graph, td: TreeDecomposition) -> int:
    """Check the three decomposition axioms; return the width."""
    T = td.tree
    if T.n == 0:
        if g.n:
            raise ValidationError("empty-trace", "no bags but the graph has vertices", 0)
        return -1
    if T.m != T.n - 1 or not T.is_connected():
        raise ValidationError("not-a-tree", "decomposition tree is not a tree")
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not (isinstance(v, int) and 0 <= v < g.n):
                raise ValidationError("bag-range", f"bag {i} holds non-vertex {v!r}", (i, v))
    bag_masks = [to_mask(b) for b in td.bags]
    for u, v in g.edges():
        want = 1 << u | 1 << v
        if not any(bm & want == want for bm in bag_masks):
            raise ValidationError("uncovered-edge", f"edge {u}-{v} is in no bag", (u, v))
    for v in range(g.n):
        trace = to_mask(i for i, bm in enumerate(bag_masks) if bm >> v & 1)
        if not trace:
            raise ValidationError("empty-trace", f"vertex {v} is in no bag", v)
        if not T.is_connected_set(trace):
            raise ValidationError("disconnected-trace", f"bags containing {v} are not connected", v)
    return td.width


def validate_separation(g: Graph, s: Separation) -> None:
    if not (s.A | s.B) <= set(range(g.n)):
        raise ValidationError("separation-range", "separation mentions non-vertices")
    if (s.A | s.B) != set(range(g.n)):
        missing = min(set(range(g.n)) - (s.A | s.B))
        raise ValidationError("separation-cover", f"vertex {missing} in neither side", missing)
    a_only = to_mask(s.A - s.B)
    b_only = to_mask(s.B - s.A)
    for v in bits(a_only):
        hit = g.adj[v] & b_only
        if hit:
            w = (hit & -hit).bit_length() - 1
            raise ValidationError("separation-edge", f"edge {v}-{w} crosses the separation", (v, w))


def is_alpha_balanced(g: Graph, s: Separation, X: Iterable[int], alpha) -> bool:
    alpha = Fraction(alpha)
    validate_separation(g, s)
    X = set(X)
    if not X <= set(range(g.n)):
        raise InvalidArgument("X must be a set of vertices")
    lim = alpha * len(X)
    return len(X & (s.A - s.B)) <= lim and len(X & (s.B - s.A)) <= lim


# ---------------------------------------------------------------------------
# exact treewidth


def _q_set(g: Graph, S: int, v: int) -> int:
    """Vertices outside ``S + v`` reachable from ``v`` through ``S``."""
    comp = g.component_mask(v, S | 1 << v)
    return g.neighborhood_mask(comp) & ~S & ~(1 << v)


def _min_fill_order(g: Graph) -> tuple[list[int], int]:
    adj = list(g.adj)
    alive = g.all_mask
    order = []
    width = -1
    for _ in range(g.n):
        best = None
        for v in bits(alive):
            nb = adj[v] & alive
            fill = 0
            for u in bits(nb):
                fill += popcount(nb & ~adj[u] & ~(1 << u))
            key = (fill, popcount(nb), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        nb = adj[v] & alive
        width = max(width, popcount(nb))
        for u in bits(nb):
            adj[u] |= nb & ~(1 << u)
        alive &= ~(1 << v)
        order.append(v)
    return order, width


def _degeneracy(g: Graph) -> int:
    alive = g.all_mask
    best = 0
    while alive:
        v = min(bits(alive), key=lambda x: popcount(g.adj[x] & alive))
        best = max(best, popcount(g.adj[v] & alive))
        alive &= ~(1 << v)
    return best


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Tree-decomposition induced by an elimination ordering."""
    if g.n == 0:
        return TreeDecomposition(Graph(0), ())
    pos = {v: i for i, v in enumerate(order)}
    adj = list(g.adj)
    later_sets = []
    for v in order:
        later = to_mask(u for u in bits(adj[v]) if pos[u] > pos[v])
        for u in bits(later):
            adj[u] |= later & ~(1 << u)
        later_sets.append(later)
    bags = [frozenset([v, *bits(later_sets[i])]) for i, v in enumerate(order)]
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = later_sets[i]
        if later:
            parent = min(pos[u] for u in bits(later))
            edges.append((i, parent))
        else:
            roots.append(i)
    for r in roots[:-1]:
        edges.append((r, roots[-1]))
    return TreeDecomposition(Graph(len(bags), edges), tuple(bags))


def treewidth_with_order(g: Graph, cap: int = TREEWIDTH_CAP) -> tuple[int, list[int]]:
    """Exact treewidth and an optimal elimination ordering.

    Dynamic programming over eliminated vertex sets, layered by size, with
    states pruned against a min-fill upper bound.
    """
    n = g.n
    if n > cap:
        raise ResourceLimit(f"treewidth oracle capped at n={cap}, got n={n}")
    if n == 0:
        return -1, []
    order, ub = _min_fill_order(g)
    lb = _degeneracy(g)
    if lb >= ub:
        return ub, order
    full = g.all_mask
    layer = {0: -1}
    parent: dict[int, tuple[int, int]] = {}
    for size in range(1, n + 1):
        nxt: dict[int, int] = {}
        for S, r in layer.items():
            rest = full & ~S
            for v in bits(rest):
                r2 = max(r, popcount(_q_set(g, S, v)))
                if r2 >= ub:
                    continue
                S2 = S | 1 << v
                old = nxt.get(S2)
                if old is None or r2 < old:
                    nxt[S2] = r2
                    parent[S2] = (S, v)
                tail = n - size - 1
                if max(r2, tail) < ub:
                    ub = max(r2, tail)
                    order = _unwind(parent, S2) + sorted(bits(full & ~S2))
        if not nxt:
            break
        layer = {S: r for S, r in nxt.items() if r < ub}
        if ub <= lb:
            break
    return ub, order


def _unwind(parent, S):
    out = []
    while S:
        S, v = parent[S]
        out.append(v)
    return out[::-1]


def treewidth_exact(g: Graph, cap: int = TREEWIDTH_CAP) -> int:
    return treewidth_with_order(g, cap)[0]


def treewidth_decomposition(g: Graph, cap: int = TREEWIDTH_CAP) -> tuple[int, TreeDecomposition]:
    tw, order = treewidth_with_order(g, cap)
    return tw, decomposition_from_order(g, order)


def treewidth_bb(g: Graph, cap: int = TREEWIDTH_CAP) -> int:
    """Branch and bound over elimination orderings; an independent oracle.

    Eliminates vertices one at a time on an explicit fill graph, pruning
    with the best width found so far and memoising eliminated sets.
    """
    if g.n > cap:
        raise ResourceLimit(f"treewidth oracle capped at n={cap}, got n={g.n}")
    if g.n == 0:
        return -1
    best = [g.n - 1]
    seen: dict[int, int] = {}

    def go(adj: dict[int, set], width: int) -> None:
        if width >= best[0]:
            return
        if len(adj) - 1 <= width:
            best[0] = width
            return
        key = to_mask(adj)
        if seen.get(key, 1 << 30) <= width:
            return
        seen[key] = width
        for v in sorted(adj, key=lambda x: (len(adj[x]), x)):
            nb = adj[v]
            w2 = max(width, len(nb))
            if w2 >= best[0]:
                continue
            new = {u: set(s) for u, s in adj.items() if u != v}
            for u in nb:
                new[u].discard(v)
                new[u] |= nb - {u}
            go(new, w2)
            # a simplicial vertex can always be eliminated first
            if all(nb - {u} <= adj[u] for u in nb):
                break

    go({v: set(g.neighbors(v)) for v in range(g.n)}, 0)
    return best[0]


def treewidth_reduced(g: Graph, cap: int = TREEWIDTH_CAP) -> int:
    """Exact treewidth after safe reductions, for sparse graphs above the cap.

    Simplicial vertices are removed (recording their degree), and
    almost-simplicial vertices whose degree is at most a known lower bound
    are eliminated.  Only the remaining kernel, per component, goes to the
    subset DP.
    """
    if g.n == 0:
        return -1
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    best = 0
    low = 0 if g.m == 0 else (1 if g.m <= g.n - len(g.components()) else 2)
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            nb = adj[v]
            bad = [u for u in nb if not nb - {u} <= adj[u]]
            if not bad:
                best = max(best, len(nb))
                low = max(low, len(nb))
            elif len(nb) <= low and any(all(nb - {u, w} <= adj[w] for w in nb - {u}) for u in nb):
                best = max(best, len(nb))
                for u in nb:
                    adj[u] |= nb - {u}
            else:
                continue
            for u in nb:
                adj[u].discard(v)
            del adj[v]
            changed = True
    if not adj:
        return best
    alive = sorted(adj)
    new_of = {v: i for i, v in enumerate(alive)}
    kernel = Graph(len(alive), [(new_of[u], new_of[w]) for u in alive for w in adj[u] if u < w])
    for comp in kernel.components():
        sub, _ = kernel.induced(bits(comp))
        best = max(best, treewidth_exact(sub, cap))
    return best


# ---------------------------------------------------------------------------
# balanced separators


def _lex_subsets(n: int, k: int):
    """All subsets of ``range(n)`` of size <= k in lexicographic tuple order."""

    def rec(start, cur):
        yield tuple(cur)
        if len(cur) == k:
            return
        for v in range(start, n):
            cur.append(v)
            yield from rec(v + 1, cur)
            cur.pop()

    yield from rec(0, [])


def exhaustive_balanced_separator(
    g: Graph, X: Iterable[int], alpha, k: int, cap: int = SEPARATOR_CAP
) -> Optional[Separation]:
    """Brute-force an ``alpha``-balanced separation for ``X`` of order <= k.

    Separators ``A & B`` are tried in lexicographic order; for the first
    one that works, components of ``G - (A & B)`` that avoid ``X`` go to
    ``B`` and the ``X``-bearing components are split so that the sorted
    tuple of ``A`` is lexicographically least.
    """
    if g.n > cap:
        raise ResourceLimit(f"separator oracle capped at n={cap}, got n={g.n}")
    alpha = Fraction(alpha)
    Xm = to_mask(X)
    nx = popcount(Xm)
    hi = alpha * nx
    for sep in _lex_subsets(g.n, k):
        Sm = to_mask(sep)
        rest_x = popcount(Xm & ~Sm)
        lo = rest_x - hi
        comps = [c for c in g.components(g.all_mask & ~Sm)]
        xcomps = [c for c in comps if c & Xm]
        counts = [popcount(c & Xm) for c in xcomps]
        reach = 1
        for cnt in counts:
            reach |= reach << cnt
        feasible = [s for s in bits(reach) if lo <= s <= hi]
        if not feasible:
            continue
        best = None
        for choice in range(1 << len(xcomps)):
            tot = sum(counts[i] for i in bits(choice))
            if not lo <= tot <= hi:
                continue
            A = Sm
            for i in bits(choice):
                A |= xcomps[i]
            key = tuple(bits(A))
            if best is None or key < best[0]:
                best = (key, A)
        A = best[1]
        B = (g.all_mask & ~A) | Sm
        return Separation(bits(A), bits(B))
    return None


def exhaustive_oracle(alpha, k: int, cap: int = SEPARATOR_CAP):
    """Wrap :func:`exhaustive_balanced_separator` as a separator oracle."""

    def oracle(sub: Graph, X: frozenset) -> Optional[Separation]:
        return exhaustive_balanced_separator(sub, X, alpha, k, cap)

    return oracle


Oracle = Callable[[Graph, frozenset], Optional[Separation]]


def td_from_separator_oracle(g: Graph, spec: BalanceSpec, oracle: Oracle) -> TreeDecomposition:
    """Tree-decomposition of width <= q + k - 1 from a separator oracle.

    Whenever the current piece has more than ``q + k`` vertices, ``X`` is
    padded to exactly ``q`` vertices with the lowest-index vertices not
    already in it, the oracle splits the piece, each side recurses with
    ``(X & A_i) | (A_1 & A_2)``, and a new root bag ``X | (A_1 & A_2)`` joins
    the two sub-decompositions.  The root bag (node 0) contains ``spec.X``.
    """
    q, k, alpha = spec.q, spec.k, spec.alpha
    if len(spec.X) > q:
        raise InvalidArgument(f"|X| = {len(spec.X)} exceeds q = {q}")
    if not spec.X <= set(range(g.n)):
        raise InvalidArgument("X must be a set of vertices of g")
    bags: list[frozenset] = []
    edges: list[tuple[int, int]] = []

    def build(W: int, Xm: int) -> int:
        node = len(bags)
        size = popcount(W)
        if size <= q + k:
            bags.append(frozenset(bits(W)))
            return node
        for v in bits(W & ~Xm):
            if popcount(Xm) >= q:
                break
            Xm |= 1 << v
        sub, old = g.induced(bits(W))
        new_of = {v: i for i, v in enumerate(old)}
        Xsub = frozenset(new_of[v] for v in bits(Xm))
        sep = oracle(sub, Xsub)
        if sep is None:
            raise NoSeparatorError("oracle found no balanced separation", sub, Xsub)
        try:
            validate_separation(sub, sep)
        except ValidationError as exc:
            raise OracleContractError(f"oracle returned an invalid separation: {exc}") from None
        if sep.order > k:
            raise OracleContractError(f"separation order {sep.order} exceeds k = {k}")
        if not is_alpha_balanced(sub, sep, Xsub, alpha):
            raise OracleContractError(f"separation is not {alpha}-balanced for X")
        A1 = to_mask(old[v] for v in sep.A)
        A2 = to_mask(old[v] for v in sep.B)
        S = A1 & A2
        if A1 == W or A2 == W:
            raise OracleContractError("balanced separation failed to shrink the piece")
        bags.append(frozenset(bits(Xm | S)))
        r1 = build(A1, (Xm & A1) | S)
        r2 = build(A2, (Xm & A2) | S)
        edges.append((node, r1))
        edges.append((node, r2))
        return node

    if g.n == 0:
        return TreeDecomposition(Graph(0), ())
    build(g.all_mask, to_mask(spec.X))
    return TreeDecomposition(Graph(len(bags), edges), tuple(bags))


def all_sets_separable(g: Graph, q: int, alpha, k: int, cap: int = SEPARATOR_CAP) -> bool:
    """Whether every size-``q`` vertex set has a balanced order-<=k separation."""
    return all(
        exhaustive_balanced_separator(g, X, alpha, k, cap) is not None
        for X in combinations(range(g.n), q)
    )
