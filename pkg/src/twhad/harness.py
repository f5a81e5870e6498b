"""Seeded instance generators and bound-checking experiment drivers."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circle import ChordDiagram, Gf2Matrix, apply_perturbation, crossing_graph, evaluate_bounds, perturbation_model_from_matrix
from .decomposition import treewidth_exact
from .errors import InvalidArgument, ResourceLimit
from .graph import Graph, make_grid, make_path_power, make_strong_grid
from .minors import hadwiger
from .ordered import StringDiagram, outer_string_graph

FAMILIES = ("outer-string", "circle-perturb", "chordal")


def instance_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream for instance ``index`` under a 64-bit master seed."""
    ss = np.random.SeedSequence(entropy=seed & (2**64 - 1), spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


# ---------------------------------------------------------------------------
# generators


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    if n < 0 or not 0 <= p <= 1:
        raise InvalidArgument("need n >= 0 and 0 <= p <= 1")
    draws = rng.random(n * (n - 1) // 2)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, [e for e, x in zip(pairs, draws) if x < p])


def random_chord_diagram(n: int, rng: np.random.Generator) -> ChordDiagram:
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    ids = [i // 2 for i in range(2 * n)]
    rng.shuffle(ids)
    return ChordDiagram.from_sequence(ids)


def _rational_root(rng: np.random.Generator) -> tuple[Fraction, Fraction]:
    # Pythagorean parametrisation keeps roots exactly on the circle
    a, b = (int(x) for x in rng.integers(1, 40, size=2))
    h = a * a + b * b
    x, y = Fraction(a * a - b * b, h), Fraction(2 * a * b, h)
    sx, sy = (int(s) for s in rng.choice([-1, 1], size=2))
    return sx * x, sy * y


def random_outer_string(n: int, segs: int, rng: np.random.Generator, denom: int = 12) -> StringDiagram:
    if n < 0 or segs < 1:
        raise InvalidArgument("need n >= 0 and segs >= 1")
    roots: list = []
    while len(roots) < n:
        r = _rational_root(rng)
        if r not in roots:
            roots.append(r)
    strings = []
    for r in roots:
        pts = [r]
        while len(pts) <= segs:
            x, y = (Fraction(int(v), denom) for v in rng.integers(-denom + 1, denom, size=2))
            if x * x + y * y < 1:
                pts.append((x, y))
        strings.append(pts)
    return StringDiagram(strings)


def random_perturbation(n: int, r: int, rng: np.random.Generator) -> Gf2Matrix:
    """Symmetric matrix of rank exactly ``r`` built from ``r`` rank-one summands."""
    if r < 0 or r > n:
        raise InvalidArgument("need 0 <= r <= n")
    while True:
        rows = [0] * n
        for _ in range(r):
            v = [int(x) for x in rng.integers(0, 2, size=n)]
            for i in range(n):
                if v[i]:
                    rows[i] ^= sum(1 << j for j in range(n) if v[j])
        p = Gf2Matrix(n, tuple(rows))
        if p.rank() == r:
            return p


def random_interval_graph(n: int, rng: np.random.Generator, span: int = 20) -> Graph:
    ivs = []
    for _ in range(n):
        a, b = sorted(int(x) for x in rng.integers(0, span, size=2))
        ivs.append((a, b))
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if ivs[u][0] <= ivs[v][1] and ivs[v][0] <= ivs[u][1]])


def generate(kind: str, params: list[str], seed: int) -> str:
    """Text of one generated instance; identical arguments give identical text."""
    rng = instance_rng(seed)
    try:
        if kind == "grid":
            return make_grid(int(params[0]), int(params[1]))[0].to_text()
        if kind == "strong-grid":
            return make_strong_grid(int(params[0]), int(params[1]))[0].to_text()
        if kind == "path-power":
            return make_path_power(int(params[0]), int(params[1])).to_text()
        if kind == "random-graph":
            return random_graph(int(params[0]), float(params[1]), rng).to_text()
        if kind == "chord-diagram":
            return random_chord_diagram(int(params[0]), rng).to_text()
        if kind == "outer-string":
            return random_outer_string(int(params[0]), int(params[1]), rng).to_text()
        if kind == "perturbation":
            return random_perturbation(int(params[0]), int(params[1]), rng).to_text()
        if kind == "interval":
            return random_interval_graph(int(params[0]), rng).to_text()
    except (IndexError, ValueError) as exc:
        raise InvalidArgument(f"bad parameters for {kind}: {exc}") from None
    raise InvalidArgument(f"unknown generator {kind!r}")


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentReport:
    family: str
    seed: int
    records: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if not r["pass"]]

    @property
    def max_ratio(self) -> float:
        return max((r["tw"] / r["had"] for r in self.records if r["had"]), default=0.0)

    def summary(self) -> dict:
        return {
            "family": self.family,
            "seed": self.seed,
            "trials": len(self.records) + len(self.skipped),
            "checked": len(self.records),
            "skipped": len(self.skipped),
            "failures": len(self.failures),
            "max_ratio": round(self.max_ratio, 6),
        }

    def to_jsonl(self, timing: bool = True) -> str:
        out = []
        for r in sorted(self.records + self.skipped, key=lambda r: r["index"]):
            if not timing:
                r = {k: v for k, v in r.items() if k != "wall_ms"}
            out.append(json.dumps(r, sort_keys=True))
        return "".join(line + "\n" for line in out)

    def to_csv(self) -> str:
        s = self.summary()
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(s), lineterminator="\n")
        w.writeheader()
        w.writerow(s)
        return buf.getvalue()


def _family_instance(family: str, rng: np.random.Generator, max_n: int) -> tuple[Graph, dict, dict]:
    """Graph, generator params, and bound params (beyond ``had``)."""
    n = int(rng.integers(1, max_n + 1))
    if family == "outer-string":
        segs = int(rng.integers(1, 4))
        g = outer_string_graph(random_outer_string(n, segs, rng)).graph
        return g, {"n": n, "segs": segs}, {}
    if family == "circle-perturb":
        r = int(rng.integers(0, min(2, n) + 1))
        cd = random_chord_diagram(n, rng)
        m = perturbation_model_from_matrix(random_perturbation(n, r, rng))
        return apply_perturbation(crossing_graph(cd), m), {"n": n, "r": r}, {"k": m.k, "r": r}
    if family == "chordal":
        return random_interval_graph(n, rng), {"n": n}, {}
    raise InvalidArgument(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _check(family: str, tw: int, had: int, extra: dict) -> tuple[int, bool]:
    if family == "outer-string":
        b = evaluate_bounds("outer-string", had=had)
        return b, tw <= b
    if family == "circle-perturb":
        b = min(evaluate_bounds("perturbed-circle-65", k=extra["k"], had=had), evaluate_bounds("rank", r=extra["r"], had=had))
        return b, tw <= b
    return had - 1, tw == had - 1


def verify_bound(family: str, trials: int, seed: int, max_n: int = 12, cap: int = 20) -> ExperimentReport:
    """Check the family's treewidth bound on ``trials`` seeded instances.

    Instances beyond the oracle caps are skipped and listed, never passed.
    """
    if family not in FAMILIES:
        raise InvalidArgument(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if trials < 0 or max_n < 1:
        raise InvalidArgument("need trials >= 0 and max_n >= 1")
    rep = ExperimentReport(family, seed)
    for i in range(trials):
        rng = instance_rng(seed, i)
        g, params, extra = _family_instance(family, rng, max_n)
        start = time.monotonic()
        base = {"index": i, "seed": seed, "family": family, "params": params, "n": g.n}
        try:
            tw = treewidth_exact(g, cap)
            had = hadwiger(g, cap)
        except ResourceLimit as exc:
            rep.skipped.append({**base, "skipped": str(exc), "wall_ms": 0.0})
            continue
        bound, ok = _check(family, tw, had, extra)
        rep.records.append(
            {
                **base,
                "tw": tw,
                "had": had,
                "bound": bound,
                "pass": ok,
                "certificate": "equality" if family == "chordal" else "upper-bound",
                "wall_ms": round((time.monotonic() - start) * 1000, 3),
            }
        )
    return rep
