"""Chord diagrams, GF(2) perturbations and perturbed circle graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Mapping, Optional, Sequence

from .decomposition import Separation, is_alpha_balanced, validate_separation
from .errors import InvalidArgument, OracleContractError, ParseError, ResourceLimit, StructuralError, ValidationError
from .graph import CyclicOrder, Graph, chords_cross, complete_graph
from .minors import Linkage, MinorModel, clique_minor, induced_sublinkage, menger_linkage, path_graph_of_linkage, require_valid


# ---------------------------------------------------------------------------
# chord diagrams


@dataclass(frozen=True)
class ChordDiagram:
    """Endpoints ``0..2n-1`` in cyclic order; ``chords[v]`` is the endpoint pair of vertex ``v``."""

    chords: tuple[tuple[int, int], ...]

    @classmethod
    def from_sequence(cls, ids: Sequence[Hashable]) -> "ChordDiagram":
        where: dict = {}
        first: list = []
        for pos, c in enumerate(ids):
            if c not in where:
                where[c] = []
                first.append(c)
            where[c].append(pos)
        bad = [c for c, ps in where.items() if len(ps) != 2]
        if bad:
            raise ValidationError("chord-endpoints", f"chord {bad[0]!r} does not appear exactly twice", bad[0])
        return cls(tuple(tuple(where[c]) for c in first))

    @property
    def n(self) -> int:
        return len(self.chords)

    @property
    def order(self) -> CyclicOrder:
        return CyclicOrder(range(2 * self.n))

    def endpoint_owner(self) -> list[int]:
        owner = [0] * (2 * self.n)
        for v, (a, b) in enumerate(self.chords):
            owner[a] = owner[b] = v
        return owner

    def to_text(self) -> str:
        # ids are written 1-based, in order of first appearance
        return " ".join(str(v + 1) for v in self.endpoint_owner()) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ChordDiagram":
        toks = text.split()
        try:
            ids = [int(x) for x in toks]
        except ValueError:
            raise ParseError("chord diagram must list integer chord ids") from None
        try:
            return cls.from_sequence(ids)
        except ValidationError as exc:
            raise ParseError(str(exc)) from None


def crossing_graph(cd: ChordDiagram) -> Graph:
    edges = []
    for i, (a, b) in enumerate(cd.chords):
        for j in range(i + 1, cd.n):
            c, d = cd.chords[j]
            if (a < c < b) != (a < d < b):
                edges.append((i, j))
    return Graph(cd.n, edges)


# ---------------------------------------------------------------------------
# GF(2) matrices and perturbation models


@dataclass(frozen=True)
class Gf2Matrix:
    """Square 0/1 matrix; ``rows[i]`` has bit ``j`` set iff entry ``(i, j)`` is 1."""

    n: int
    rows: tuple[int, ...]

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "Gf2Matrix":
        n = len(entries)
        rows = []
        for r in entries:
            if len(r) != n:
                raise InvalidArgument("matrix must be square")
            rows.append(sum(1 << j for j, x in enumerate(r) if x & 1))
        return cls(n, tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def column(self, j: int) -> int:
        return sum(1 << i for i in range(self.n) if self.rows[i] >> j & 1)

    def is_symmetric(self) -> bool:
        return all(self.entry(i, j) == self.entry(j, i) for i in range(self.n) for j in range(i))

    def rank(self) -> int:
        basis: dict[int, int] = {}
        for r in self.rows:
            while r:
                top = r.bit_length() - 1
                if top not in basis:
                    basis[top] = r
                    break
                r ^= basis[top]
        return len(basis)

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if other.n != self.n:
            raise InvalidArgument("dimension mismatch")
        return Gf2Matrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def to_text(self) -> str:
        return "".join("".join(str(self.entry(i, j)) for j in range(self.n)) + "\n" for i in range(self.n))

    @classmethod
    def from_text(cls, text: str) -> "Gf2Matrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if any(set(ln) - {"0", "1"} for ln in lines):
            raise ParseError("matrix lines may only contain 0 and 1")
        if any(len(ln) != len(lines) for ln in lines):
            raise ParseError("matrix must be square")
        return cls.from_lists([[int(ch) for ch in ln] for ln in lines])


def adjacency_matrix(g: Graph) -> Gf2Matrix:
    return Gf2Matrix(g.n, tuple(g.adj))


@dataclass(frozen=True)
class PerturbationModel:
    """Colouring ``zeta`` into ``range(k)`` and a loopy graph on the colours."""

    k: int
    H: frozenset  # frozensets of size 1 (loops) or 2
    zeta: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= c < self.k for c in self.zeta):
            raise InvalidArgument("colour out of range")
        for e in self.H:
            if not 1 <= len(e) <= 2 or any(not 0 <= c < self.k for c in e):
                raise InvalidArgument(f"bad auxiliary edge {set(e)}")

    def flips(self, c1: int, c2: int) -> bool:
        return frozenset((c1, c2)) in self.H

    def has_loop(self, c: int) -> bool:
        return frozenset((c,)) in self.H


def perturbation_model_from_matrix(p: Gf2Matrix) -> PerturbationModel:
    """Colour each vertex by its column of ``p`` inside the column space."""
    if not p.is_symmetric():
        raise InvalidArgument("perturbation matrix must be symmetric")
    cols = [p.column(j) for j in range(p.n)]
    basis: list[int] = []
    reduced: dict[int, int] = {}
    for c in cols:
        r = c
        while r:
            top = r.bit_length() - 1
            if top not in reduced:
                reduced[top] = r
                basis.append(c)
                break
            r ^= reduced[top]
    space = []
    for mask in range(1 << len(basis)):
        v = 0
        for i, b in enumerate(basis):
            if mask >> i & 1:
                v ^= b
        space.append(v)
    index = {v: j for j, v in enumerate(space)}
    zeta = tuple(index[c] for c in cols)
    H = set()
    for i in range(p.n):
        for i2 in range(p.n):
            if p.entry(i2, i):
                H.add(frozenset((zeta[i], zeta[i2])))
    return PerturbationModel(len(space), frozenset(H), zeta)


def apply_perturbation(g0: Graph, m: PerturbationModel) -> Graph:
    if len(m.zeta) != g0.n:
        raise InvalidArgument("colouring must cover every vertex")
    edges = []
    for v in range(g0.n):
        for w in range(v + 1, g0.n):
            if g0.has_edge(v, w) != m.flips(m.zeta[v], m.zeta[w]):
                edges.append((v, w))
    return Graph(g0.n, edges)


def perturb_by_matrix(g0: Graph, p: Gf2Matrix) -> Graph:
    """``A0 + P`` with the diagonal cleared, computed directly."""
    a = adjacency_matrix(g0) + p
    return Graph.from_masks([r & ~(1 << i) for i, r in enumerate(a.rows)])


# ---------------------------------------------------------------------------
# colour classes of a cyclically ordered complete graph


def good_colour(c: CyclicOrder, partition: Mapping[tuple, Hashable]):
    """A colour whose class has a crossing and a non-crossing pair of disjoint edges.

    Returns ``(colour, crossing_pair, non_crossing_pair)`` or ``None``.
    """
    labels = list(c.elements)
    classes: dict = {}
    for a, b in combinations(labels, 2):
        key = (a, b) if (a, b) in partition else (b, a)
        if key not in partition:
            raise InvalidArgument(f"edge {a}{b} has no colour")
        classes.setdefault(partition[key], []).append(tuple(sorted((a, b))))
    for colour in sorted(classes, key=lambda x: (-len(classes[x]), str(x))):
        es = sorted(classes[colour])
        cross = non = None
        for e, f in combinations(es, 2):
            if set(e) & set(f):
                continue
            if chords_cross(c, e, f):
                cross = cross or (e, f)
            else:
                non = non or (e, f)
            if cross and non:
                return colour, cross, non
    return None


# ---------------------------------------------------------------------------
# separator or clique minor


@dataclass(frozen=True)
class PerturbedResult:
    kind: str  # "separation" or "clique"
    separation: Optional[Separation] = None
    model: Optional[MinorModel] = None
    route: str = ""
    meta: dict = field(default_factory=dict, compare=False)


def segment_intervals(cd: ChordDiagram, X: Sequence[int], parts: int) -> list[range]:
    """Cut the endpoint order into ``parts`` intervals with equal root counts of ``X``."""
    roots = set()
    for v in X:
        roots.update(cd.chords[v])
    share = len(roots) // parts
    out, start, seen = [], 0, 0
    for pos in range(2 * cd.n):
        if pos in roots:
            seen += 1
        if seen == share and len(out) < parts - 1:
            out.append(range(start, pos + 1))
            start, seen = pos + 1, 0
    out.append(range(start, 2 * cd.n))
    return out


def _kt_to_clique(g: Graph, left: list[int], right: list[int], t: int) -> MinorModel:
    sets = [{left[i], right[i]} for i in range(t - 1)] + [{left[t - 1]}, {right[t - 1]}]
    return MinorModel(complete_graph(t + 1), sets)


def perturbed_separator_or_clique(
    cd: ChordDiagram, m: PerturbationModel, X: Sequence[int], t: int, fallback_cap: int = 20
) -> PerturbedResult:
    """Balanced separation of order below ``k(4k+9)t`` or a K_{t+1} model.

    ``alpha = (4k-1)/(4k)``.  The route taken is recorded in ``route``.
    """
    k = m.k
    if t < 1:
        raise InvalidArgument("t must be positive")
    X = sorted(set(X))
    need = 4 * k * k * (4 * k + 9) * t
    if len(X) != need:
        raise InvalidArgument(f"|X| must be 4k^2(4k+9)t = {need}, got {len(X)}")
    if len(m.zeta) != cd.n:
        raise InvalidArgument("colouring must cover every chord")
    g0 = crossing_graph(cd)
    g = apply_perturbation(g0, m)
    s = 4 * k
    alpha = Fraction(4 * k - 1, 4 * k)
    bound = k * (4 * k + 9) * t
    segs = segment_intervals(cd, X, s)
    seg_of = {}
    for j, I in enumerate(segs):
        for pos in I:
            seg_of[pos] = j
    D = [set() for _ in range(s)]
    for v, (a, b) in enumerate(cd.chords):
        D[seg_of[a]].add(v)
        D[seg_of[b]].add(v)

    for a, b in combinations(range(s), 2):
        L, sep = menger_linkage(g, D[a], D[b])
        if sep.order < bound:
            validate_separation(g, sep)
            if not is_alpha_balanced(g, sep, X, alpha):
                raise OracleContractError("Menger cut is not balanced")
            return PerturbedResult("separation", separation=sep, route="menger", meta={"segments": (a, b)})

    F: dict[tuple[int, int], list[int]] = {}
    colour: dict[tuple[int, int], int] = {}
    limit = 2 * t * k * (2 * k + 4)
    for a, b in combinations(range(s), 2):
        common = D[a] & D[b]
        rest = [v for v in range(g.n) if v not in common]
        sub, old = g.induced(rest)
        new_of = {v: i for i, v in enumerate(old)}
        L, _ = menger_linkage(sub, [new_of[v] for v in D[a] - D[b]], [new_of[v] for v in D[b] - D[a]])
        if len(L) > limit:
            try:
                induced_sublinkage(sub, L, k * (2 * k + 4) + 1, t, strict=False)
            except StructuralError as exc:
                contracted = exc.witness
                try:
                    found = clique_minor(contracted, t + 1, cap=max(fallback_cap, contracted.n))
                except ResourceLimit:
                    found = None
                if found is not None:
                    sets = [{old[v] for p in bs for v in L.paths[p]} for bs in found.branch_sets]
                    model = MinorModel(complete_graph(t + 1), sets)
                    require_valid(g, model)
                    return PerturbedResult("clique", model=model, route="induced-linkage", meta={"segments": (a, b)})
            return _fallback(g, t, fallback_cap, f"long induced linkage between segments {a},{b}")
        by_colour: dict[int, list[int]] = {}
        for v in sorted(common):
            by_colour.setdefault(m.zeta[v], []).append(v)
        best = max(sorted(by_colour), key=lambda c: len(by_colour[c]), default=None)
        if best is None or len(by_colour[best]) < t:
            return _fallback(g, t, fallback_cap, f"no monochromatic set between segments {a},{b}")
        F[(a, b)] = by_colour[best][:t]
        colour[(a, b)] = best

    found = good_colour(CyclicOrder(range(s)), colour)
    if found is None:
        return _fallback(g, t, fallback_cap, "no good colour")
    i, cross, non = found
    e, f = non if m.has_loop(i) else cross
    model = _kt_to_clique(g, F[e], F[f], t)
    ok = all(g.has_edge(x, y) for x in F[e] for y in F[f])
    if not ok:
        return _fallback(g, t, fallback_cap, "bipartite pair not complete")
    require_valid(g, model)
    return PerturbedResult("clique", model=model, route="good-colour", meta={"colour": i, "pair": (e, f)})


def _fallback(g: Graph, t: int, cap: int, reason: str) -> PerturbedResult:
    found = clique_minor(g, t + 1, cap)
    if found is None:
        raise StructuralError(f"no separation and no K_{t + 1} minor ({reason})")
    return PerturbedResult("clique", model=found, route="fallback-exhaustive", meta={"reason": reason})


# ---------------------------------------------------------------------------
# displayed bounds


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def evaluate_bounds(kind: str, **p) -> int | bool:
    """Closed-form bounds on treewidth in terms of the Hadwiger number.

    ``kind`` is one of ``outer-string`` (had), ``perturbed-circle`` and
    ``perturbed-circle-65`` (k, had), ``rank`` (r, had), ``surface`` and
    ``surface-tight`` and ``surface-proof`` (g, c, had), or the genus checks
    ``genus-clique`` and ``genus-biclique`` (g).
    """
    if any(v < 0 for v in p.values()):
        raise InvalidArgument("parameters must be non-negative")
    if kind == "outer-string":
        return 15 * p["had"] - 2
    if kind == "perturbed-circle":
        k = p["k"]
        return (16 * k**3 + 40 * k**2 + 9 * k) * p["had"]
    if kind == "perturbed-circle-65":
        return 65 * p["k"] ** 3 * p["had"]
    if kind == "rank":
        return 65 * 2 ** (3 * p["r"]) * p["had"]
    if kind in ("surface", "surface-tight"):
        g, c, t = p["g"], p["c"], p["had"]
        # A * g^2 * sqrt(g) + B with integers A, B; take the exact ceiling
        A, B = (2000 * c * c * t, 1000 * c * t) if kind == "surface" else (1615 * c * c * t, 960 * c * t)
        return B + _ceil_sqrt(A * A * g**5)
    if kind == "surface-proof":
        g, c, t = p["g"], p["c"], p["had"]
        d = 2 * g + 3
        s = _ceil_sqrt(6 * g) + 5
        m = (math.comb(s, 2) * (2 * d * t - 1)) // 3 + 1
        return (c * s + 1) * (4 * m + 2 * d * t * c)
    if kind == "genus-clique":
        g = p["g"]
        s = _ceil_sqrt(6 * g) + 5
        return 2 * math.comb(s, 2) > 6 * (s + g - 2)
    if kind == "genus-biclique":
        g = p["g"]
        d = 2 * g + 3
        return 3 * d > 2 * (d + g - 2)
    raise InvalidArgument(f"unknown bound kind {kind!r}")
