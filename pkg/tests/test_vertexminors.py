import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twhad.errors import InvalidArgument, ParseError, ValidationError
from twhad.graph import Graph, complete_bipartite, complete_graph, cycle_graph, one_subdivision, path_graph, subdivide
from twhad.minors import InducedMinorModel, MinorModel, validate_model
from twhad.vertexminors import (
    LC,
    Delete,
    MarkedDrawing,
    apply_vm_sequence,
    eliminate_crossings_vm,
    local_complement,
    maxdeg3_vm_from_3subdivision,
    minor_to_induced_in_1subdivision,
    minor_to_vm_sequence,
    recognize_subdivision,
    smooth_crossings,
    steps_from_text,
    steps_to_text,
)

from _support import graphs, random_3subdivision_host, random_maxdeg3, random_minor_triple, to_nx


def _replay_is(g, steps, h, image) -> bool:
    res, labels = apply_vm_sequence(g, steps)
    pos = {old: i for i, old in enumerate(labels)}
    if res.n != h.n:
        return False
    return all(
        res.has_edge(pos[image[p]], pos[image[q]]) == h.has_edge(p, q) for p in range(h.n) for q in range(p + 1, h.n)
    )


def test_local_complement_of_star_centre():
    g = complete_bipartite(1, 3)
    assert local_complement(g, 0) == complete_graph(4)


@settings(max_examples=80)
@given(graphs(max_n=8, min_n=1), st.data())
def test_local_complement_is_involution(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    assert local_complement(local_complement(g, v), v) == g


@settings(max_examples=50)
@given(graphs(max_n=8, min_n=1), st.data())
def test_local_complement_against_networkx(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    h = to_nx(g)
    nb = list(h.neighbors(v))
    for i, a in enumerate(nb):
        for b in nb[i + 1 :]:
            if h.has_edge(a, b):
                h.remove_edge(a, b)
            else:
                h.add_edge(a, b)
    assert sorted(tuple(sorted(e)) for e in h.edges()) == local_complement(g, v).edges()


def test_steps_text():
    steps = [LC(3), Delete(3), LC(0)]
    assert steps_from_text(steps_to_text(steps)) == steps
    with pytest.raises(ParseError):
        steps_from_text("pivot 1\n")
    with pytest.raises(InvalidArgument):
        apply_vm_sequence(path_graph(3), [Delete(1), LC(1)])


def test_triangle_from_hexagon():
    # C6 is the 1-subdivision of K3
    s = one_subdivision(complete_graph(3))
    m = MinorModel(complete_graph(3), [[0], [1], [2]])
    steps, image = minor_to_vm_sequence(s, complete_graph(3), m)
    assert [x.kind for x in steps] == ["lc", "lc", "lc", "del", "del", "del"]
    assert {x.v for x in steps} == {3, 4, 5}
    assert _replay_is(s, steps, complete_graph(3), image)


def test_k3_from_subdivided_k4():
    s = subdivide(complete_graph(4), 3)
    m = MinorModel(complete_graph(3), [[0], [1], [2, 3]])
    steps, image = minor_to_vm_sequence(s, complete_graph(3), m)
    assert _replay_is(s, steps, complete_graph(3), image)


def test_induced_model_in_1subdivision():
    g = complete_graph(4)
    m = MinorModel(complete_graph(3), [[0], [1], [2, 3]])
    im = minor_to_induced_in_1subdivision(g, complete_graph(3), m)
    assert im.induced and validate_model(one_subdivision(g), im)[0]


def test_minor_constructions_random():
    rng = random.Random(3)
    for _ in range(40):
        g, h, m = random_minor_triple(rng, rng.randint(2, 8), 0.45)
        assert validate_model(one_subdivision(g), minor_to_induced_in_1subdivision(g, h, m))[0]
        s = subdivide(g, {e: rng.randint(2, 4) for e in g.edges()})
        steps, image = minor_to_vm_sequence(s, h, m)
        assert _replay_is(s, steps, h, image)


def test_improper_subdivision_rejected():
    s = subdivide(path_graph(3), {(0, 1): 1, (1, 2): 2})
    with pytest.raises(InvalidArgument):
        minor_to_vm_sequence(s, path_graph(3), MinorModel(path_graph(3), [[0], [1], [2]]))


def test_recognize_subdivision():
    s = subdivide(complete_graph(4), 2)
    assert recognize_subdivision(s, {u: u for u in range(4)}, complete_graph(4))
    assert not recognize_subdivision(complete_graph(4), {u: u for u in range(4)}, complete_graph(4))
    assert recognize_subdivision(complete_graph(4), {u: u for u in range(4)}, complete_graph(4), proper=False)
    assert not recognize_subdivision(cycle_graph(8), {0: 0, 1: 4}, Graph(2, [(0, 1)]))


def _single_crossing() -> MarkedDrawing:
    # K4 drawn with the chords 0-2 and 1-3 crossing at vertex 4
    edges = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (2, 4), (1, 4), (3, 4)]
    return MarkedDrawing(Graph(5, edges), {4: (0, 1, 2, 3)})


def test_single_crossing_gadget():
    d = _single_crossing()
    g, keep = smooth_crossings(d)
    assert g == complete_graph(4) and keep == [0, 1, 2, 3]
    d3, steps, G, branch = eliminate_crossings_vm(d)
    assert [str(x) for x in steps] == ["lc 4", "del 4"]
    res, labels = apply_vm_sequence(d3, steps)
    pos = {old: i for i, old in enumerate(labels)}
    assert recognize_subdivision(res, {u: pos[v] for u, v in branch.items()}, complete_graph(4))


def test_drawing_validation_and_text():
    d = _single_crossing()
    assert MarkedDrawing.from_text(d.to_text()) == d
    bad = MarkedDrawing(d.graph, {4: (0, 1, 2, 2)})
    with pytest.raises(ValidationError):
        bad.validate()


def test_identity_3subdivision_needs_no_steps():
    h = complete_bipartite(1, 3)
    g = subdivide(h, 4)
    m = InducedMinorModel(g, [[v] for v in range(g.n)])
    steps, branch = maxdeg3_vm_from_3subdivision(g, h, m)
    assert steps == []
    assert branch == {u: u for u in range(4)}


def test_maxdeg3_guards():
    with pytest.raises(InvalidArgument):
        maxdeg3_vm_from_3subdivision(complete_graph(5), complete_graph(5), None)
    h = path_graph(2)
    g = subdivide(h, 4)
    with pytest.raises(InvalidArgument):
        maxdeg3_vm_from_3subdivision(g, h, MinorModel(g, [[v] for v in range(g.n)]))


def test_maxdeg3_random_hosts():
    rng = random.Random(8)
    for _ in range(40):
        h = random_maxdeg3(rng, rng.randint(1, 6))
        g, m = random_3subdivision_host(rng, h)
        steps, branch = maxdeg3_vm_from_3subdivision(g, h, m)
        res, labels = apply_vm_sequence(g, steps)
        pos = {old: i for i, old in enumerate(labels)}
        assert recognize_subdivision(res, {u: pos[v] for u, v in branch.items()}, h)
