import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from kasteleyn_action.orientations import enumerate_trees, fundamental_cycle
from kasteleyn_action.planar import (
    AmbiguousRotation,
    Dart,
    DocumentError,
    HasBridge,
    HasSelfLoop,
    NonPlanarRotation,
    NotACycle,
    NotConnected,
    RootNotOnOuterFace,
    parse_graph,
    reverse_cycle,
)

from conftest import ALL, builtin, fuzzed


def doc(vertices, edges, root="0", **extra):
    out = {"name": "t", "vertices": vertices,
           "edges": [{"id": i, "u": u, "v": v} for i, u, v in edges], "root": root}
    out.update(extra)
    return json.dumps(out)


TRIANGLE = [{"id": "0", "x": 0, "y": 0}, {"id": "1", "x": 1, "y": 0}, {"id": "2", "x": 0, "y": 1}]


def test_face_counts(k3, c4, theta):
    assert len(k3.faces) == 2
    assert len(c4.faces) == 2
    assert len(theta.faces) == 3


def test_face_lengths(k3, c4, theta):
    assert sorted(len(f.boundary) for f in k3.faces) == [3, 3]
    assert sorted(len(f.boundary) for f in c4.faces) == [4, 4]
    assert sorted(len(f.boundary) for f in theta.faces) == [2, 2, 2]


def test_dual_shapes(k3, c4, theta):
    assert len(k3.dual().vertices) == 2 and len(k3.dual().edges) == 3
    assert len(c4.dual().vertices) == 2 and len(c4.dual().edges) == 4
    pairs = {frozenset((a, b)) for _, a, b in theta.dual().edges}
    assert len(pairs) == 3 and all(len(p) == 2 for p in pairs)


@pytest.mark.parametrize("name", ALL)
def test_euler_and_dart_partition(name):
    g = builtin(name)
    assert g.n_vertices - g.n_edges + len(g.faces) == 2
    darts = [d for f in g.faces for d in f.boundary]
    assert len(darts) == len(set(darts)) == 2 * g.n_edges


def test_ccw_triangle(k3):
    cycle = [Dart(0, False), Dart(1, False), Dart(2, False)]
    assert k3.is_ccw(cycle)
    assert not k3.is_ccw(reverse_cycle(cycle))


def test_ccw_theta_two_gon(theta):
    c = [theta.dart(0, "a"), theta.dart(1, "b")]
    assert theta.is_ccw(c) != theta.is_ccw(reverse_cycle(c))
    inside = theta.enclosed_faces(c)
    assert theta.is_ccw(c) == all(theta.left_face(d) in inside for d in c)


def test_not_a_cycle(k3):
    with pytest.raises(NotACycle):
        k3.is_ccw([Dart(0, False), Dart(1, True)])


@pytest.mark.parametrize("name", ALL)
def test_ccw_matches_shoelace(name):
    g = builtin(name)
    if g.coords is None or not g.has_straight_line_drawing:
        pytest.skip("no straight-line drawing")
    for t in enumerate_trees(g)[:60]:
        for e in range(g.n_edges):
            if e in t:
                continue
            c = fundamental_cycle(g, t, Dart(e, False))
            assert g.is_ccw(c) == (g.signed_area(c) > 0)
            assert g.is_ccw(c) != g.is_ccw(reverse_cycle(c))


@pytest.mark.parametrize("name", ALL)
def test_canonical_round_trip(name):
    g = builtin(name)
    again = parse_graph(g.canonical_text())
    assert again == g
    assert again.canonical_text() == g.canonical_text()


@settings(max_examples=40, deadline=None)
@given(fuzzed(10))
def test_fuzzed_graphs_are_valid(g):
    assert g.n_vertices - g.n_edges + len(g.faces) == 2
    assert g.root in {g.tail(d) for d in g.outer_face.boundary}
    assert parse_graph(g.canonical_text()) == g


def test_rational_coordinates():
    g = parse_graph(doc([{"id": "0", "x": "0", "y": 0}, {"id": "1", "x": "1/3", "y": 0},
                         {"id": "2", "x": 0, "y": [2, 7]}],
                        [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0")]))
    assert g.coords["1"] == (Fraction(1, 3), 0)
    assert g.coords["2"] == (0, Fraction(2, 7))


def test_errors():
    with pytest.raises(HasSelfLoop):
        parse_graph(doc(TRIANGLE, [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0"), ("d", "0", "0")]))
    with pytest.raises(HasBridge):
        parse_graph(doc(TRIANGLE, [("a", "0", "1"), ("b", "1", "2")]))
    with pytest.raises(NotConnected):
        parse_graph(doc(TRIANGLE + [{"id": "3", "x": 5, "y": 5}],
                        [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0")]))
    with pytest.raises(AmbiguousRotation):
        parse_graph(doc([{"id": "0"}, {"id": "1"}], [("a", "0", "1"), ("b", "0", "1")]))
    with pytest.raises(DocumentError):
        parse_graph("{not json")


def test_root_must_touch_outer_face():
    vertices = TRIANGLE[:2] + [{"id": "2", "x": 1, "y": 1}, {"id": "3", "x": 0, "y": 1},
                               {"id": "m", "x": "1/2", "y": "1/2"}]
    edges = [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "3"), ("d", "3", "0"),
             ("e", "0", "m"), ("f", "1", "m"), ("g", "2", "m"), ("h", "3", "m")]
    assert parse_graph(doc(vertices, edges, root="0")).root == "0"
    with pytest.raises(RootNotOnOuterFace):
        parse_graph(doc(vertices, edges, root="m"))


def test_bad_rotation_rejected():
    # a rotation that does not describe a planar embedding of K4
    edges = [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0"),
             ("d", "0", "3"), ("e", "1", "3"), ("f", "2", "3")]
    good = {"0": ["a", "d", "c"], "1": ["a", "b", "e"], "2": ["b", "c", "f"], "3": ["d", "e", "f"]}
    outer = [["a", "1"], ["c", "0"], ["b", "2"]]
    vertices = [{"id": v} for v in "0123"]
    assert len(parse_graph(doc(vertices, edges, rotation=good, outer_face=outer)).faces) == 4
    text = doc(vertices, edges, rotation=dict(good, **{"3": ["d", "f", "e"]}), outer_face=outer)
    with pytest.raises((NonPlanarRotation, DocumentError)):
        parse_graph(text)
