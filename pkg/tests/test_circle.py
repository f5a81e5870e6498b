import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twhad.circle import (
    ChordDiagram,
    Gf2Matrix,
    PerturbationModel,
    adjacency_matrix,
    apply_perturbation,
    crossing_graph,
    evaluate_bounds,
    good_colour,
    perturb_by_matrix,
    perturbation_model_from_matrix,
    perturbed_separator_or_clique,
)
from twhad.decomposition import is_alpha_balanced, treewidth_exact
from twhad.errors import InvalidArgument, ParseError, ValidationError
from twhad.graph import CyclicOrder, Graph, chords_cross, complete_graph, cyclic_between, empty_graph
from twhad.harness import instance_rng, random_chord_diagram, random_perturbation
from twhad.minors import hadwiger, validate_model

from _support import graphs


def test_crossing_graph_examples():
    assert crossing_graph(ChordDiagram.from_text("1 2 1 2")) == complete_graph(2)
    assert crossing_graph(ChordDiagram.from_text("1 1 2 2")) == Graph(2)
    assert crossing_graph(ChordDiagram.from_text("1 2 3 1 2 3")) == complete_graph(3)


def test_chord_text():
    cd = ChordDiagram.from_text("7 3 7 3")
    assert cd.to_text() == "1 2 1 2\n"
    assert ChordDiagram.from_text(cd.to_text()) == cd
    with pytest.raises(ParseError):
        ChordDiagram.from_text("1 2 1")
    with pytest.raises(ParseError):
        ChordDiagram.from_text("a a")
    with pytest.raises(ValidationError):
        ChordDiagram.from_sequence([1, 1, 1, 1])


def test_gf2_basics():
    p = Gf2Matrix.from_text("011\n101\n110\n")
    assert p.is_symmetric() and p.rank() == 2
    assert Gf2Matrix.from_text(p.to_text()) == p
    assert (p + p).rank() == 0
    with pytest.raises(ParseError):
        Gf2Matrix.from_text("01\n1\n")
    with pytest.raises(ParseError):
        Gf2Matrix.from_text("02\n20\n")


def test_gf2_rank_against_numpy():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(1, 9)
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        # rank over GF(2) by elimination on numpy integer arrays
        a = np.array(rows, dtype=np.uint8)
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if a[i, c]), None)
            if piv is None:
                continue
            a[[r, piv]] = a[[piv, r]]
            for i in range(n):
                if i != r and a[i, c]:
                    a[i] ^= a[r]
            r += 1
        assert Gf2Matrix.from_lists(rows).rank() == r


def test_zero_perturbation():
    m = perturbation_model_from_matrix(Gf2Matrix.from_lists([[0] * 4] * 4))
    assert m.k == 1 and m.H == frozenset() and set(m.zeta) == {0}


def test_all_ones_perturbation_complements():
    p = Gf2Matrix.from_lists([[1] * 5] * 5)
    m = perturbation_model_from_matrix(p)
    assert m.k == 2 and m.H == frozenset({frozenset({1})}) and set(m.zeta) == {1}
    g0 = crossing_graph(ChordDiagram.from_text("1 2 3 1 4 2 4 5 3 5"))
    assert apply_perturbation(g0, m) == g0.complement()


def test_two_colour_bipartite_flip():
    m = PerturbationModel(2, frozenset({frozenset({0, 1})}), (0, 0, 1, 1))
    assert apply_perturbation(empty_graph(4), m).edges() == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert apply_perturbation(complete_graph(4), PerturbationModel(2, frozenset(), (0, 1, 0, 1))) == complete_graph(4)
    with pytest.raises(InvalidArgument):
        PerturbationModel(2, frozenset(), (0, 2))
    with pytest.raises(InvalidArgument):
        perturbation_model_from_matrix(Gf2Matrix.from_lists([[0, 1], [0, 0]]))


def test_random_rank_two_model():
    rng = instance_rng(42)
    p = random_perturbation(10, 2, rng)
    m = perturbation_model_from_matrix(p)
    assert p.rank() == 2 and m.k <= 4
    g0 = crossing_graph(random_chord_diagram(10, rng))
    assert apply_perturbation(g0, m) == perturb_by_matrix(g0, p)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10, min_n=1), st.integers(0, 3), st.integers(0, 2**32))
def test_round_trip_and_involution(g0, r, seed):
    r = min(r, g0.n)
    p = random_perturbation(g0.n, r, instance_rng(seed))
    m = perturbation_model_from_matrix(p)
    assert m.k <= 2**r
    g = apply_perturbation(g0, m)
    assert adjacency_matrix(g).rows == tuple(
        row & ~(1 << i) for i, row in enumerate((adjacency_matrix(g0) + p).rows)
    )
    assert apply_perturbation(g, m) == g0


def test_good_colour_single_class():
    c = CyclicOrder([1, 2, 3, 4])
    part = {e: 0 for e in combinations([1, 2, 3, 4], 2)}
    assert good_colour(c, part) == (0, ((1, 3), (2, 4)), ((1, 2), (3, 4)))


def test_good_colour_full_class():
    c = CyclicOrder(range(8))
    part = {e: 1 for e in combinations(range(8), 2)}
    assert good_colour(c, part)[0] == 1


@pytest.mark.parametrize("seed", range(20))
def test_good_colour_random_partitions(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    labels = list(range(4 * k))
    rng.shuffle(labels)
    c = CyclicOrder(labels)
    part = {e: rng.randrange(k) for e in combinations(range(4 * k), 2)}
    i, cross, non = good_colour(c, part)
    for pair, want in ((cross, True), (non, False)):
        e, f = pair
        assert not set(e) & set(f)
        assert part[e] == part[f] == i
        x, y = e
        assert (cyclic_between(c, x, f[0], y) != cyclic_between(c, x, f[1], y)) == want
        assert chords_cross(c, e, f) == want


def test_perturbed_separator_on_nested_chords():
    cd = ChordDiagram.from_sequence(list(range(52)) + list(range(51, -1, -1)))
    m = perturbation_model_from_matrix(Gf2Matrix.from_lists([[0] * 52] * 52))
    res = perturbed_separator_or_clique(cd, m, range(52), 1)
    assert res.kind == "separation" and res.separation.order < 13
    assert is_alpha_balanced(crossing_graph(cd), res.separation, range(52), Fraction(3, 4))


def test_perturbed_separator_clique_from_dense_diagram():
    cd = ChordDiagram.from_sequence(list(range(52)) * 2)
    m = perturbation_model_from_matrix(Gf2Matrix.from_lists([[0] * 52] * 52))
    res = perturbed_separator_or_clique(cd, m, range(52), 1)
    assert res.kind == "clique" and res.route != "fallback-exhaustive"
    assert validate_model(crossing_graph(cd), res.model)[0]


def test_perturbed_separator_routes_on_random_diagrams():
    rng = random.Random(1)
    m = PerturbationModel(1, frozenset(), (0,) * 52)
    routes = set()
    for _ in range(40):
        ids = list(range(52)) * 2
        rng.shuffle(ids)
        cd = ChordDiagram.from_sequence(ids)
        g = crossing_graph(cd)
        res = perturbed_separator_or_clique(cd, m, range(52), 1)
        routes.add(res.route)
        if res.kind == "clique":
            assert validate_model(g, res.model)[0]
        else:
            assert res.separation.order < 13
    assert "good-colour" in routes


def test_perturbed_separator_size_guard():
    cd = ChordDiagram.from_sequence(list(range(52)) * 2)
    m = PerturbationModel(1, frozenset(), (0,) * 52)
    with pytest.raises(InvalidArgument):
        perturbed_separator_or_clique(cd, m, range(51), 1)


def test_bound_examples():
    assert evaluate_bounds("outer-string", had=1) == 13
    assert evaluate_bounds("rank", r=0, had=3) == 195
    assert evaluate_bounds("perturbed-circle", k=1, had=1) == 65
    assert evaluate_bounds("perturbed-circle-65", k=2, had=1) == 520
    with pytest.raises(InvalidArgument):
        evaluate_bounds("nope")
    with pytest.raises(InvalidArgument):
        evaluate_bounds("rank", r=-1, had=1)


def test_genus_one_clique_check():
    s = 8
    assert 2 * (s * (s - 1) // 2) > 6 * (s + 1 - 2)
    assert evaluate_bounds("genus-clique", g=1)


def test_surface_bounds_exact_ceiling():
    # g = 4: sqrt(g^5) = 32 exactly
    assert evaluate_bounds("surface", g=4, c=1, had=1) == 2000 * 32 + 1000
    assert evaluate_bounds("surface-tight", g=4, c=1, had=1) == 1615 * 32 + 960
    # g = 2: 2000 * 2^2.5 = 11313.708... rounds up
    assert evaluate_bounds("surface", g=2, c=1, had=1) == 11314 + 1000
    for g in range(0, 30):
        for c in (1, 2, 3):
            assert evaluate_bounds("surface-tight", g=g, c=c, had=2) <= evaluate_bounds("surface", g=g, c=c, had=2)


def test_surface_intermediate_value():
    # (cs+1)(4m+2dtc) at g=1, c=1, t=1: s=8, d=5, m=85
    assert evaluate_bounds("surface-proof", g=1, c=1, had=1) == 9 * 350
    assert evaluate_bounds("surface-proof", g=0, c=1, had=1) == 444


def test_perturbed_circle_treewidth_bound():
    for i in range(60):
        rng = instance_rng(9, i)
        n = int(rng.integers(1, 13))
        r = int(rng.integers(0, min(2, n) + 1))
        cd = random_chord_diagram(n, rng)
        m = perturbation_model_from_matrix(random_perturbation(n, r, rng))
        g = apply_perturbation(crossing_graph(cd), m)
        assert treewidth_exact(g) <= 65 * m.k**3 * hadwiger(g)
