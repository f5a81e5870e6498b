"""Minor and induced-minor certificates, exact searches and linkages."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .decomposition import Separation
from .errors import InvalidArgument, ParseError, ResourceLimit, StructuralError, ValidationError
from .graph import Graph, bits, complete_bipartite, complete_graph, make_grid, popcount, to_mask

MINOR_CAP = 16
HADWIGER_CAP = 20
MIS_CAP = 64
IGRID_CAP = 12


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class MinorModel:
    """Branch set ``branch_sets[p]`` of host vertices for each pattern vertex ``p``."""

    pattern: Graph
    branch_sets: tuple[frozenset, ...]

    induced = False

    def __init__(self, pattern: Graph, branch_sets: Sequence[Iterable[int]]):
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "branch_sets", tuple(frozenset(b) for b in branch_sets))
        if len(self.branch_sets) != pattern.n:
            raise InvalidArgument("need exactly one branch set per pattern vertex")

    def to_text(self) -> str:
        lines = [f"model {len(self.branch_sets)}"]
        for p, b in enumerate(self.branch_sets):
            lines.append(" ".join(["s", str(p)] + [str(v) for v in sorted(b)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, pattern: Graph):
        sets: dict[int, list[int]] = {}
        count = None
        try:
            for line in text.splitlines():
                parts = line.split()
                if not parts:
                    continue
                if parts[0] == "model":
                    count = int(parts[1])
                elif parts[0] == "s":
                    sets[int(parts[1])] = [int(x) for x in parts[2:]]
                else:
                    raise ParseError(f"unknown model line {line!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed model line: {exc}") from None
        if count is None or sorted(sets) != list(range(count)):
            raise ParseError("model file needs 'model <k>' and lines 's 0'..'s k-1'")
        return cls(pattern, [sets[p] for p in range(count)])

    def as_induced(self) -> "InducedMinorModel":
        return InducedMinorModel(self.pattern, self.branch_sets)

    def as_minor(self) -> "MinorModel":
        return MinorModel(self.pattern, self.branch_sets)


class InducedMinorModel(MinorModel):
    induced = True


def _model_violation(g: Graph, m: MinorModel) -> Optional[ValidationError]:
    masks = []
    used = 0
    for p, b in enumerate(m.branch_sets):
        if not b:
            return ValidationError("empty", f"branch set {p} is empty", p)
        if not all(isinstance(v, int) and 0 <= v < g.n for v in b):
            return ValidationError("range", f"branch set {p} holds a non-vertex", p)
        bm = to_mask(b)
        if bm & used:
            other = next(q for q, om in enumerate(masks) if om & bm)
            return ValidationError("overlap", f"branch sets {other} and {p} overlap", (other, p))
        used |= bm
        masks.append(bm)
        if not g.is_connected_set(bm):
            return ValidationError("disconnected", f"branch set {p} is not connected", p)
    nbhd = [g.neighborhood_mask(bm) for bm in masks]
    P = m.pattern
    for p in range(P.n):
        for q in range(p + 1, P.n):
            touching = bool(nbhd[p] & masks[q])
            if P.has_edge(p, q) and not touching:
                return ValidationError("missing-edge", f"no host edge between branch sets {p} and {q}", (p, q))
            if m.induced and not P.has_edge(p, q) and touching:
                return ValidationError(
                    "extra-adjacency", f"branch sets {p} and {q} are adjacent but {p}{q} is a non-edge", (p, q)
                )
    return None


def validate_model(g: Graph, m: MinorModel) -> tuple[bool, Optional[ValidationError]]:
    """``(True, None)`` or ``(False, violation)``."""
    err = _model_violation(g, m)
    return err is None, err


def require_valid(g: Graph, m: MinorModel) -> None:
    err = _model_violation(g, m)
    if err is not None:
        raise err


# ---------------------------------------------------------------------------
# connected sets


def connected_sets(g: Graph, within: int | None = None) -> list[int]:
    """All non-empty connected vertex sets inside ``within``, as masks."""
    if within is None:
        within = g.all_mask
    out = []
    for root in bits(within):
        allowed = within & ~((1 << root) - 1)

        def grow(cur: int, frontier: int, banned: int):
            out.append(cur)
            cand = frontier
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                new_front = (frontier | g.adj[v]) & allowed & ~cur & ~(1 << v) & ~banned
                grow(cur | low, new_front & ~low, banned)
                banned |= low
                frontier &= ~low

        grow(1 << root, g.adj[root] & allowed & ~(1 << root), 0)
    return out


# ---------------------------------------------------------------------------
# general minor search


def _twin_classes(h: Graph) -> list[int]:
    """Representative per pattern vertex; twins are interchangeable in a model."""
    rep = list(range(h.n))
    for p in range(h.n):
        for q in range(p):
            if rep[q] != q:
                continue
            mp = h.adj[p] & ~(1 << q)
            mq = h.adj[q] & ~(1 << p)
            if mp == mq:
                rep[p] = q
                break
    return rep


def _search_model(g: Graph, h: Graph, induced: bool, cap: int):
    if g.n > cap:
        raise ResourceLimit(f"minor search capped at host n={cap}, got n={g.n}")
    if h.n > g.n:
        return None
    if h.n == 0:
        return []
    order = sorted(range(h.n), key=lambda p: (-h.degree(p), p))
    rep = _twin_classes(h)
    cands = sorted(connected_sets(g), key=lambda s: (popcount(s), tuple(bits(s))))
    nb = [0] * h.n
    closed = [0] * h.n
    assign = [0] * h.n
    placed: list[int] = []

    def feasible(used: int, i: int) -> bool:
        free = g.all_mask & ~used
        if popcount(free) < len(order) - i:
            return False
        comps = None
        for p in order[i:]:
            need = [nb[q] for q in placed if h.adj[p] >> q & 1]
            if len(need) < 2:
                continue
            if comps is None:
                comps = g.components(free)
            if not any(all(c & x for x in need) for c in comps):
                return False
        return True

    def rec(i: int, used: int):
        if i == len(order):
            return True
        p = order[i]
        need = [nb[q] for q in placed if h.adj[p] >> q & 1]
        avoid = 0
        if induced:
            for q in placed:
                if not h.adj[p] >> q & 1:
                    avoid |= closed[q]
        # twins of p that are already placed: keep their minima increasing
        floor = 0
        for q in placed:
            if rep[q] == rep[p]:
                floor = max(floor, assign[q] & -assign[q])
        for s in cands:
            if s & used or s & avoid or (s & -s) <= floor:
                continue
            if not all(s & x for x in need):
                continue
            assign[p] = s
            nb[p] = g.neighborhood_mask(s)
            closed[p] = nb[p] | s
            placed.append(p)
            if feasible(used | s, i + 1) and rec(i + 1, used | s):
                return True
            placed.pop()
        return False

    if rec(0, 0):
        return [frozenset(bits(assign[p])) for p in range(h.n)]
    return None


def contains_minor(g: Graph, h: Graph, cap: int = MINOR_CAP) -> Optional[MinorModel]:
    sets = _search_model(g, h, False, cap)
    return None if sets is None else MinorModel(h, sets)


def contains_induced_minor(g: Graph, h: Graph, cap: int = MINOR_CAP) -> Optional[InducedMinorModel]:
    sets = _search_model(g, h, True, cap)
    return None if sets is None else InducedMinorModel(h, sets)


# ---------------------------------------------------------------------------
# clique minors


def _clique_in_component(g: Graph, t: int) -> Optional[list[int]]:
    """Canonical backtracking for ``t`` pairwise adjacent disjoint connected sets.

    Branch sets are chosen in increasing order of their minimum vertex.
    """
    if t == 1:
        return [1] if g.n else None
    sets = connected_sets(g)
    sets.sort(key=lambda s: (s & -s, popcount(s)))
    full = g.all_mask
    nbs = {s: g.neighborhood_mask(s) for s in sets}

    def viable(chosen_nbs: list[int], avail: int, need: int) -> bool:
        # future sets live in components of G[avail] touching every chosen set
        room = 0
        for comp in g.components(avail):
            if all(comp & x for x in chosen_nbs):
                room += popcount(comp)
        return room >= need

    def rec(chosen: list[int], chosen_nbs: list[int], cands: list[int]):
        if len(chosen) == t:
            return list(chosen)
        need = t - len(chosen)
        last_min = (chosen[-1] & -chosen[-1]) if chosen else 0
        for idx, s in enumerate(cands):
            if (s & -s) <= last_min:
                continue
            low = s & -s
            avail = full & ~((low << 1) - 1) & ~s
            for c in chosen:
                avail &= ~c
            ns = nbs[s]
            new_nbs = chosen_nbs + [ns]
            if need > 1 and not viable(new_nbs, avail, need - 1):
                continue
            sub = [x for x in cands[idx + 1 :] if not x & s and x & ns and (x & -x) > low and not x & ~avail]
            if need > 1 and len(sub) < need - 1:
                continue
            chosen.append(s)
            got = rec(chosen, new_nbs, sub)
            if got:
                return got
            chosen.pop()
        return None

    return rec([], [], sets)


def _reduce_and_find_clique(g: Graph, t: int) -> Optional[list[frozenset]]:
    """Find ``t`` branch sets of a K_t model, or ``None``.

    Safe reductions first: simplicial vertices either witness K_t directly
    or are deleted; for ``t >= 4`` degree-2 vertices are contracted into a
    neighbour.  Each component is then searched separately.
    """
    if t <= 0:
        return []
    if t == 1:
        return [frozenset([0])] if g.n else None
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    members = {v: {v} for v in range(g.n)}
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in adj:
                continue
            nb = adj[v]
            simplicial = all(nb - {u} <= adj[u] for u in nb)
            if simplicial:
                if len(nb) + 1 >= t:
                    pick = [v] + sorted(nb)[: t - 1]
                    return [frozenset(members[u]) for u in pick]
                for u in nb:
                    adj[u].discard(v)
                del adj[v]
                changed = True
            elif len(nb) == 2 and t >= 4:
                u, w = sorted(nb)
                adj[u].discard(v)
                adj[w].discard(v)
                adj[u].add(w)
                adj[w].add(u)
                members[u] |= members[v]
                del adj[v]
                changed = True
    alive = sorted(adj)
    if not alive:
        return None
    new_of = {v: i for i, v in enumerate(alive)}
    red = Graph(len(alive), [(new_of[u], new_of[w]) for u in alive for w in adj[u] if u < w])
    for comp in red.components():
        nc = popcount(comp)
        if nc < t:
            continue
        mc = sum(popcount(red.adj[v] & comp) for v in bits(comp)) // 2
        # a K_t model spanning the component contracts nc - t edges
        if mc - (nc - t) < t * (t - 1) // 2:
            continue
        sub, old = red.induced(bits(comp))
        found = _clique_in_component(sub, t)
        if found:
            out = []
            for s in found:
                verts = set()
                for x in bits(s):
                    verts |= members[alive[old[x]]]
                out.append(frozenset(verts))
            return out
    return None


def clique_minor(g: Graph, t: int, cap: int = HADWIGER_CAP) -> Optional[MinorModel]:
    """A K_t minor model in ``g``, or ``None``."""
    if g.n > cap:
        raise ResourceLimit(f"clique-minor search capped at n={cap}, got n={g.n}")
    if t > g.n:
        return None
    sets = _reduce_and_find_clique(g, t)
    return None if sets is None else MinorModel(complete_graph(t), sets)


def _greedy_clique_model(g: Graph) -> list[frozenset]:
    """Contract greedily until a clique remains; a quick lower bound."""
    best: list[frozenset] = [frozenset([0])] if g.n else []
    for comp in g.components():
        adj = {v: set(g.neighbors(v)) for v in bits(comp)}
        members = {v: {v} for v in adj}
        while adj:
            if all(len(nb) == len(adj) - 1 for nb in adj.values()):
                if len(adj) > len(best):
                    best = [frozenset(members[v]) for v in sorted(adj)]
                break
            v = min(adj, key=lambda x: (len(adj[x]), x))
            if not adj[v]:
                del adj[v]
                continue
            u = min(adj[v], key=lambda x: (len(adj[x] & adj[v]), x))
            for w in adj[v]:
                adj[w].discard(v)
                if w != u:
                    adj[w].add(u)
                    adj[u].add(w)
            members[u] |= members[v]
            del adj[v]
    return best


def hadwiger_model(g: Graph, cap: int = HADWIGER_CAP) -> tuple[int, MinorModel]:
    """Exact Hadwiger number with a witnessing K_t model."""
    from .decomposition import _min_fill_order

    if g.n > cap:
        raise ResourceLimit(f"hadwiger oracle capped at n={cap}, got n={g.n}")
    if g.n == 0:
        return 0, MinorModel(Graph(0), [])
    sets = _greedy_clique_model(g)
    upper = _min_fill_order(g)[1] + 1
    t = len(sets)
    while t < upper:
        found = _reduce_and_find_clique(g, t + 1)
        if found is None:
            break
        sets = found
        t += 1
    return t, MinorModel(complete_graph(t), sets)


def hadwiger(g: Graph, cap: int = HADWIGER_CAP) -> int:
    return hadwiger_model(g, cap)[0]


# ---------------------------------------------------------------------------
# independent sets


def max_independent_set(g: Graph, cap: int = MIS_CAP) -> frozenset:
    """A maximum independent set; lexicographically least among the maximum ones."""
    if g.n > cap:
        raise ResourceLimit(f"independent-set oracle capped at n={cap}, got n={g.n}")
    adj = g.adj

    @lru_cache(maxsize=None)
    def alpha(mask: int) -> int:
        if not mask:
            return 0
        best_v, best_d = -1, -1
        for v in bits(mask):
            d = popcount(adj[v] & mask)
            if d <= 1:
                return 1 + alpha(mask & ~(1 << v) & ~adj[v])
            if d > best_d:
                best_v, best_d = v, d
        v = best_v
        return max(alpha(mask & ~(1 << v)), 1 + alpha(mask & ~(1 << v) & ~adj[v]))

    rest = g.all_mask
    target = alpha(rest)
    chosen = []
    for v in range(g.n):
        if not rest >> v & 1:
            continue
        after = rest & ~(1 << v) & ~adj[v]
        if 1 + alpha(after) == target:
            chosen.append(v)
            rest = after
            target -= 1
        else:
            rest &= ~(1 << v)
    return frozenset(chosen)


# ---------------------------------------------------------------------------
# linkages


@dataclass(frozen=True)
class Linkage:
    paths: tuple[tuple[int, ...], ...]
    S: frozenset
    T: frozenset

    def __len__(self) -> int:
        return len(self.paths)


def validate_linkage(g: Graph, L: Linkage) -> None:
    used = set()
    ends = L.S | L.T
    for i, p in enumerate(L.paths):
        if not p:
            raise ValidationError("empty-path", f"path {i} is empty", i)
        if p[0] not in L.S or p[-1] not in L.T:
            raise ValidationError("endpoints", f"path {i} is not an (S,T)-path", i)
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                raise ValidationError("not-a-path", f"path {i} uses non-edge {a}-{b}", (a, b))
        if len(set(p)) != len(p):
            raise ValidationError("not-a-path", f"path {i} repeats a vertex", i)
        if any(v in ends for v in p[1:-1]):
            raise ValidationError("interior", f"path {i} meets S or T internally", i)
        if used & set(p):
            raise ValidationError("overlap", f"path {i} meets an earlier path", i)
        used |= set(p)


def menger_linkage(g: Graph, S: Iterable[int], T: Iterable[int]) -> tuple[Linkage, Separation]:
    """Maximum (S,T)-linkage and a separation of equal order.

    Unit vertex capacities, shortest augmenting paths.  The separation
    satisfies ``S <= A`` and ``T <= B``.
    """
    S = frozenset(S)
    T = frozenset(T)
    n = g.n
    if not (S | T) <= set(range(n)):
        raise InvalidArgument("S and T must be vertex sets of g")
    src, snk = 2 * n, 2 * n + 1
    inf = n + 1
    cap: list[dict[int, int]] = [dict() for _ in range(2 * n + 2)]

    def arc(a, b, c):
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    for v in range(n):
        arc(2 * v, 2 * v + 1, 1)
        for u in g.neighbors(v):
            arc(2 * v + 1, 2 * u, inf)
    for v in sorted(S):
        arc(src, 2 * v, inf)
    for v in sorted(T):
        arc(2 * v + 1, snk, inf)
    original = [dict(d) for d in cap]

    def bfs():
        prev = {src: None}
        dq = deque([src])
        while dq:
            a = dq.popleft()
            for b in sorted(cap[a]):
                if cap[a][b] > 0 and b not in prev:
                    prev[b] = a
                    if b == snk:
                        return prev
                    dq.append(b)
        return prev

    flow = 0
    while True:
        prev = bfs()
        if snk not in prev:
            break
        b = snk
        while prev[b] is not None:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1
    reach = set(prev)

    # decompose the flow
    used = {a: {b: original[a][b] - cap[a][b] for b in original[a] if original[a][b] > 0 and original[a][b] - cap[a][b] > 0} for a in range(2 * n + 2)}
    paths = []
    for _ in range(flow):
        walk = []
        a = src
        while a != snk:
            b = min(used[a])
            used[a][b] -= 1
            if not used[a][b]:
                del used[a][b]
            if b < 2 * n and b % 2 == 0:
                walk.append(b // 2)
            a = b
        last_s = max(i for i, v in enumerate(walk) if v in S)
        first_t = next(i for i in range(last_s, len(walk)) if walk[i] in T)
        paths.append(tuple(walk[last_s : first_t + 1]))
    paths.sort()
    R = {v for v in range(n) if 2 * v in reach}
    C = {v for v in R if 2 * v + 1 not in reach}
    A = R
    B = (set(range(n)) - R) | C
    return Linkage(tuple(paths), S, T), Separation(A, B)


def path_graph_of_linkage(g: Graph, L: Linkage) -> Graph:
    """Contract every path to a vertex; adjacent paths become adjacent."""
    masks = [to_mask(p) for p in L.paths]
    nbhd = [g.neighborhood_mask(m) | m for m in masks]
    edges = [(i, j) for i in range(len(masks)) for j in range(i + 1, len(masks)) if nbhd[i] & masks[j]]
    return Graph(len(masks), edges)


def induced_sublinkage(g: Graph, L: Linkage, k: int, t: int, strict: bool = True) -> Linkage:
    """At least ``k`` pairwise non-adjacent paths of ``L``.

    With ``strict`` the size precondition ``|L| >= 2kt`` is enforced.
    """
    if strict and len(L) < 2 * k * t:
        raise InvalidArgument(f"need |L| >= 2kt = {2 * k * t}, got {len(L)}")
    H = path_graph_of_linkage(g, L)
    ind = sorted(max_independent_set(H))
    if len(ind) < k:
        raise StructuralError(
            f"contracted linkage graph has independence number {len(ind)} < {k}; "
            f"its Hadwiger number exceeds {t}",
            witness=H,
        )
    return Linkage(tuple(L.paths[i] for i in ind), L.S, L.T)


# ---------------------------------------------------------------------------
# working with models


def contract_model(g: Graph, m: MinorModel) -> Graph:
    """The graph on pattern vertices with adjacency inherited from ``g``."""
    require_valid(g, m)
    masks = [to_mask(b) for b in m.branch_sets]
    nbhd = [g.neighborhood_mask(x) for x in masks]
    n = len(masks)
    return Graph(n, [(p, q) for p in range(n) for q in range(p + 1, n) if nbhd[p] & masks[q]])


def compose_models(outer: MinorModel, inner: MinorModel) -> MinorModel:
    """Lift ``inner`` (a model inside outer's pattern) into outer's host."""
    if any(v >= outer.pattern.n or v < 0 for b in inner.branch_sets for v in b):
        raise InvalidArgument("inner model does not live in the outer pattern")
    sets = [frozenset().union(*(outer.branch_sets[p] for p in b)) for b in inner.branch_sets]
    cls = InducedMinorModel if (outer.induced and inner.induced) else MinorModel
    return cls(inner.pattern, sets)


def identity_model(g: Graph, induced: bool = True) -> MinorModel:
    cls = InducedMinorModel if induced else MinorModel
    return cls(g, [[v] for v in range(g.n)])


def induced_grid_number(g: Graph, cap: int = IGRID_CAP) -> int:
    """Largest k such that the (k x k)-grid is an induced minor of ``g``."""
    if g.n > cap:
        raise ResourceLimit(f"induced-grid oracle capped at n={cap}, got n={g.n}")
    k = 0
    while (k + 1) ** 2 <= g.n:
        grid, _ = make_grid(k + 1, k + 1)
        if contains_induced_minor(g, grid, cap) is None:
            break
        k += 1
    return k


def _topological_kernel(g: Graph) -> Graph:
    """Drop vertices of degree at most 1 and suppress degree-2 vertices."""
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            nb = adj[v]
            if len(nb) <= 1:
                for u in nb:
                    adj[u].discard(v)
                del adj[v]
                changed = True
            elif len(nb) == 2:
                u, w = nb
                adj[u].discard(v)
                adj[w].discard(v)
                adj[u].add(w)
                adj[w].add(u)
                del adj[v]
                changed = True
    alive = sorted(adj)
    new_of = {v: i for i, v in enumerate(alive)}
    return Graph(len(alive), [(new_of[u], new_of[w]) for u in alive for w in adj[u] if u < w])


def planarity_witness(g: Graph, cap: int = MINOR_CAP) -> Optional[MinorModel]:
    """A K_5 or K_{3,3} minor model of ``g``'s kernel, or ``None`` if planar.

    The model refers to the topological kernel, which has the same minors
    among graphs of minimum degree 3.
    """
    k = _topological_kernel(g)
    for comp in k.components():
        sub, _ = k.induced(bits(comp))
        if sub.n <= 4:
            continue
        for h in (complete_graph(5), complete_bipartite(3, 3)):
            found = contains_minor(sub, h, cap)
            if found is not None:
                return found
    return None


def is_planar(g: Graph, cap: int = MINOR_CAP) -> bool:
    """Planarity by Wagner's criterion on the topological kernel."""
    return planarity_witness(g, cap) is None


def is_forest(g: Graph) -> bool:
    return g.m == g.n - len(g.components())


def hadwiger_at_most(g: Graph, t: int, cap: int = HADWIGER_CAP) -> bool:
    """Exact test of ``had(g) <= t``.

    Uses the exact characterisations for ``t <= 3`` (edgeless, forest,
    treewidth at most 2), so those cases work beyond the search cap.
    """
    from .decomposition import treewidth_reduced

    if t < 0:
        return False
    if t == 0:
        return g.n == 0
    if t == 1:
        return g.m == 0
    if t == 2:
        return is_forest(g)
    if t == 3:
        return treewidth_reduced(g) <= 2
    return clique_minor(g, t + 1, cap) is None
