import random

import pytest

from twhad.dichotomy import (
    DichotomyInput,
    appendix_pattern,
    block_jumps,
    extract_planar_high_tw,
    grid_dichotomy,
    is_jump,
    k2s_in_strong_grid,
)
from twhad.decomposition import treewidth_reduced
from twhad.errors import InvalidArgument, ResourceLimit
from twhad.graph import Graph, make_grid
from twhad.minors import InducedMinorModel, is_planar, validate_model


def augmented_grid(rng: random.Random, k: int, t: int, jumps_per_block: int = 1, extra: int = 0) -> DichotomyInput:
    N = t * (2 * k + 1)
    g, cm = make_grid(N, N)
    edges = set(g.edges())
    M = 2 * k + 1
    for a in range(t):
        for b in range(t):
            inner = [cm.index(a * M + x, b * M + y) for x in range(2, M) for y in range(2, M)]
            for _ in range(jumps_per_block):
                u, v = rng.sample(inner, 2) if len(inner) >= 2 else (None, None)
                if u is not None and is_jump(cm, u, v):
                    edges.add((min(u, v), max(u, v)))
    for _ in range(extra):
        u, v = rng.sample(range(N * N), 2)
        edges.add((min(u, v), max(u, v)))
    return DichotomyInput(Graph(N * N, sorted(edges)), k, t)


def test_input_requires_grid_edges():
    with pytest.raises(InvalidArgument):
        DichotomyInput(Graph(36), 1, 2)
    with pytest.raises(InvalidArgument):
        DichotomyInput(make_grid(5, 5)[0], 1, 2)


def test_pure_grid_gives_grid_branch():
    g, _ = make_grid(6, 6)
    res = grid_dichotomy(DichotomyInput(g, 1, 2))
    assert res.kind == "grid" and res.block == (1, 1)
    g, _ = make_grid(10, 10)
    res = grid_dichotomy(DichotomyInput(g, 2, 2))
    assert res.kind == "grid" and res.model.induced and res.model.pattern == make_grid(2, 2)[0]


def test_every_block_jumped_gives_clique():
    rng = random.Random(2)
    inp = augmented_grid(rng, 2, 2, jumps_per_block=6)
    assert all(block_jumps(inp, a, b) for a in (1, 2) for b in (1, 2))
    res = grid_dichotomy(inp)
    assert res.kind == "clique" and res.model.pattern.n == 2
    assert validate_model(inp.host, res.model)[0]


def test_k_one_blocks_cannot_hold_jumps():
    rng = random.Random(4)
    for _ in range(10):
        inp = augmented_grid(rng, 1, 2, jumps_per_block=3, extra=5)
        assert grid_dichotomy(inp).kind == "grid"


@pytest.mark.parametrize("t", [2, 3, 4])
def test_clique_for_larger_t(t):
    rng = random.Random(t)
    inp = augmented_grid(rng, 2, t, jumps_per_block=8)
    assert all(block_jumps(inp, a, b) for a in range(1, t + 1) for b in range(1, t + 1))
    res = grid_dichotomy(inp)
    assert res.kind == "clique" and res.model.pattern.n == t
    assert validate_model(inp.host, res.model)[0]


@pytest.mark.parametrize("s", range(1, 6))
def test_k2s_formulas(s):
    m, host, _ = k2s_in_strong_grid(s)
    assert m.pattern.n == 2 * s
    assert validate_model(host, m)[0]


def test_appendix_pattern_size():
    assert len(appendix_pattern(2)) == 20


def test_extraction_on_pure_grid():
    g, _ = make_grid(4, 7)
    m = InducedMinorModel(g, [[v] for v in range(g.n)])
    out = extract_planar_high_tw(g, m, 2)
    sub, _ = g.induced(sorted(out))
    assert len(out) == 20 and is_planar(sub) and treewidth_reduced(sub) >= 2
    with pytest.raises(ResourceLimit):
        extract_planar_high_tw(g, m, 3)
