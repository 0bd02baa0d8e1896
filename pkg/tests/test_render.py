import xml.etree.ElementTree as ET

import pydot
import pytest

from kasteleyn_action.gplus import construct_gplus, induced_kasteleyn_orientation, temperley
from kasteleyn_action.orientations import enumerate_trees, q_connected_orientation
from kasteleyn_action.render import gplus_scene, primal_scene, render_all, to_dot, to_svg

from conftest import SMALL, builtin


@pytest.mark.parametrize("name", SMALL)
def test_outputs_parse(name, tmp_path):
    g = builtin(name)
    h = construct_gplus(g)
    t = enumerate_trees(g)[0]
    o = q_connected_orientation(g, t)
    paths = render_all(g, tmp_path, tree=t, orientation=o, matching=temperley(t, h),
                       kasteleyn=induced_kasteleyn_orientation(o, h), h=h)
    assert len(paths) == 16
    for p in paths:
        if p.suffix == ".svg":
            root = ET.parse(p).getroot()
            assert root.tag.endswith("svg")
        else:
            graphs = pydot.graph_from_dot_data(p.read_text())
            assert graphs and len(graphs) == 1


def test_colors_follow_convention(k3):
    h = construct_gplus(k3)
    scene = gplus_scene(h)
    kinds = {n.id: n.kind for n in scene.nodes}
    assert {kinds[h.white_name(w)] for w in range(h.n_white)} == {"white"}
    assert {kinds[h.black_name(b)] for b in range(h.n_black)} == {"black"}
    svg = to_svg(scene)
    assert svg.count('fill="#ffffff"') >= h.n_white


def test_overlays(k3):
    t = frozenset({0, 1})
    scene = primal_scene(k3, tree=t, orientation=q_connected_orientation(k3, t), with_dual=True)
    bold = {l.id for l in scene.lines if l.bold}
    assert bold == {"e1", "e2", "*e3"}
    dot = to_dot(scene)
    assert dot.startswith("digraph") and "penwidth=3" in dot


def test_render_is_deterministic(theta, tmp_path):
    a = [p.read_text() for p in render_all(theta, tmp_path / "a")]
    b = [p.read_text() for p in render_all(theta, tmp_path / "b")]
    assert a == b
