"""DOT and SVG drawings of G, G with its dual, and G+, with optional overlays.

White vertices of G+ are drawn hollow and black ones filled.  Highlighted
edges (a tree, a matching) are thick; oriented edges carry arrowheads.
Graphs without coordinates get a circular layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

from .gplus import DUAL, GPlusGraph, GPlusOrientation, Matching
from .orientations import Orientation, SpanningTree
from .planar import EmbeddedPlanarGraph

STYLE = {
    "primal": {"fill": "#444444", "stroke": "#000000", "r": 5},
    "dual": {"fill": "#ffffff", "stroke": "#1f5fbf", "r": 4},
    "white": {"fill": "#ffffff", "stroke": "#000000", "r": 5},
    "black": {"fill": "#000000", "stroke": "#000000", "r": 5},
}
EDGE_COLOR = {"primal": "#000000", "dual": "#1f5fbf", "half": "#555555"}


@dataclass
class Node:
    id: str
    x: float
    y: float
    kind: str


@dataclass
class Line:
    id: str
    a: str
    b: str
    kind: str
    bold: bool = False
    directed: bool = False
    dashed: bool = False


@dataclass
class Scene:
    name: str
    nodes: list[Node] = field(default_factory=list)
    lines: list[Line] = field(default_factory=list)


def layout(g: EmbeddedPlanarGraph) -> dict[str, tuple[float, float]]:
    if g.coords is not None:
        return {v: (float(x), float(y)) for v, (x, y) in g.coords.items()}
    n = g.n_vertices
    return {v: (math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
            for k, v in enumerate(g.vertices)}


def _face_points(g: EmbeddedPlanarGraph, pos) -> dict[int, tuple[float, float]]:
    out = {}
    for f, face in enumerate(g.faces):
        pts = [pos[g.tail(d)] for d in face.boundary]
        out[f] = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    out[g.outer] = (min(xs) - 0.3 * span, min(ys) - 0.3 * span)
    return out


def _oriented(a: str, b: str, forward: bool) -> tuple[str, str]:
    return (a, b) if forward else (b, a)


def primal_scene(g: EmbeddedPlanarGraph, tree: SpanningTree | None = None,
                 orientation: Orientation | None = None, with_dual: bool = False) -> Scene:
    pos = layout(g)
    scene = Scene(g.name + (" with dual" if with_dual else ""))
    for v in g.vertices:
        scene.nodes.append(Node(v, *pos[v], "primal"))
    for i, e in enumerate(g.edges):
        a, b = e.u, e.v
        if orientation is not None:
            a, b = _oriented(a, b, orientation.forward[i])
        scene.lines.append(Line(e.id, a, b, "primal", bold=tree is not None and i in tree,
                                directed=orientation is not None))
    if with_dual:
        fpos = _face_points(g, pos)
        for f, face in enumerate(g.faces):
            scene.nodes.append(Node("*" + face.id, *fpos[f], "dual"))
        for e_id, left, right in g.dual().edges:
            i = g.edge_index[e_id]
            scene.lines.append(Line("*" + e_id, "*" + right, "*" + left, "dual",
                                    bold=tree is not None and i not in tree, dashed=True))
    return scene


def gplus_scene(h: GPlusGraph, matching: Matching | None = None,
                orientation: GPlusOrientation | None = None) -> Scene:
    g = h.source
    pos = layout(g)
    fpos = _face_points(g, pos)
    scene = Scene(g.name + "+")
    for w, e in enumerate(g.edges):
        (x0, y0), (x1, y1) = pos[e.u], pos[e.v]
        scene.nodes.append(Node(h.white_name(w), (x0 + x1) / 2, (y0 + y1) / 2, "white"))
    for b, (kind, tag) in enumerate(h.blacks):
        p = pos[tag] if kind == "vertex" else fpos[tag]
        scene.nodes.append(Node(h.black_name(b), *p, "black"))
    used = set(matching.by_white) if matching is not None else set()
    for k, e in enumerate(h.edges):
        a, b = h.white_name(e.white), h.black_name(e.black)
        if orientation is not None:
            a, b = _oriented(a, b, orientation.positive[k])
        scene.lines.append(Line(f"h{k}", a, b, "half", bold=k in used,
                                directed=orientation is not None, dashed=e.kind == DUAL))
    return scene


# -- DOT -------------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(scene: Scene, scale: float = 2.0) -> str:
    directed = any(l.directed for l in scene.lines)
    arrow = "->" if directed else "--"
    out = [("digraph " if directed else "graph ") + _q(scene.name) + " {",
           "  node [shape=circle, width=0.15, fixedsize=true, label=\"\"];"]
    for n in scene.nodes:
        st = STYLE[n.kind]
        out.append(f"  {_q(n.id)} [pos=\"{n.x * scale:.4f},{n.y * scale:.4f}!\", "
                   f"style=filled, fillcolor=\"{st['fill']}\", color=\"{st['stroke']}\", "
                   f"xlabel={_q(n.id)}];")
    for l in scene.lines:
        attrs = [f"color=\"{EDGE_COLOR[l.kind]}\"", f"label={_q(l.id)}"]
        if l.bold:
            attrs.append("penwidth=3")
        if l.dashed:
            attrs.append("style=dashed")
        if directed and not l.directed:
            attrs.append("dir=none")
        out.append(f"  {_q(l.a)} {arrow} {_q(l.b)} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"


# -- SVG -------------------------------------------------------------------------

def to_svg(scene: Scene, size: int = 480, margin: int = 40) -> str:
    xs = [n.x for n in scene.nodes] or [0.0]
    ys = [n.y for n in scene.nodes] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    k = (size - 2 * margin) / span

    def tr(x, y):
        # flip y so that counterclockwise in the document stays counterclockwise on screen
        return margin + (x - min(xs)) * k, size - margin - (y - min(ys)) * k

    where = {n.id: tr(n.x, n.y) for n in scene.nodes}
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f"<title>{escape(scene.name)}</title>",
           '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" '
           'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
           '<path d="M 0 0 L 10 5 L 0 10 z" fill="#000000"/></marker></defs>']
    radius = {n.id: STYLE[n.kind]["r"] for n in scene.nodes}
    for l in scene.lines:
        (x0, y0), (x1, y1) = where[l.a], where[l.b]
        if l.directed:
            # stop the arrowhead at the target's rim
            d = math.hypot(x1 - x0, y1 - y0) or 1.0
            x1 -= (x1 - x0) * radius[l.b] / d
            y1 -= (y1 - y0) * radius[l.b] / d
        attrs = [f'stroke="{EDGE_COLOR[l.kind]}"', f'stroke-width="{3.5 if l.bold else 1.2}"']
        if l.dashed:
            attrs.append('stroke-dasharray="4 3"')
        if l.directed:
            attrs.append('marker-end="url(#arrow)"')
        out.append(f'<line id="{escape(l.id)}" x1="{x0:.2f}" y1="{y0:.2f}" '
                   f'x2="{x1:.2f}" y2="{y1:.2f}" {" ".join(attrs)}/>')
    for n in scene.nodes:
        st = STYLE[n.kind]
        x, y = where[n.id]
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{st["r"]}" fill="{st["fill"]}" '
                   f'stroke="{st["stroke"]}"/>')
        out.append(f'<text x="{x + 7:.2f}" y="{y - 7:.2f}" font-size="10">{escape(n.id)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_scene(scene: Scene, out_dir: Path, stem: str) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / f"{stem}.dot", out_dir / f"{stem}.svg"]
    paths[0].write_text(to_dot(scene))
    paths[1].write_text(to_svg(scene))
    return paths


def render_all(g: EmbeddedPlanarGraph, out_dir: Path, tree: SpanningTree | None = None,
               orientation: Orientation | None = None, matching: Matching | None = None,
               kasteleyn: GPlusOrientation | None = None,
               h: GPlusGraph | None = None) -> list[Path]:
    """The base drawings plus one drawing per supplied overlay."""
    from .gplus import construct_gplus

    h = h or construct_gplus(g)
    scenes: list[tuple[str, Scene]] = [
        ("g", primal_scene(g)),
        ("g_dual", primal_scene(g, with_dual=True)),
        ("gplus", gplus_scene(h)),
    ]
    if tree is not None:
        scenes.append(("g_tree", primal_scene(g, tree=tree)))
        scenes.append(("g_dual_tree", primal_scene(g, tree=tree, with_dual=True)))
    if orientation is not None:
        scenes.append(("g_orientation", primal_scene(g, tree=tree, orientation=orientation)))
    if kasteleyn is not None:
        scenes.append(("gplus_kasteleyn", gplus_scene(h, orientation=kasteleyn)))
    if matching is not None:
        scenes.append(("gplus_matching", gplus_scene(h, matching=matching, orientation=kasteleyn)))
    paths = []
    for stem, scene in scenes:
        paths.extend(write_scene(scene, out_dir, stem))
    return paths


def stems(paths: Iterable[Path]) -> list[str]:
    return sorted({p.stem for p in paths})
