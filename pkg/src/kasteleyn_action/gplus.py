"""The Temperley graph G+ and its Kasteleyn data.

G+ is the overlay of G with its dual, subdivided at every crossing, minus the
root q, the outer-face vertex q*, and their incident half-edges.  White
vertices are indexed like the edges of G; black vertices are the non-root
vertices of G followed by the bounded faces of G.

Orientations of G+ are stored as one boolean per G+ edge: ``True`` means the
edge is *positive*, i.e. runs white -> black.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, NamedTuple

from .algebra import Cokernel, Matrix, determinant
from .orientations import (
    Orientation,
    SpanningTree,
    is_q_connected,
    is_spanning_tree,
    q_connected_orientation,
    tree_key,
)
from .planar import Dart, EmbeddedPlanarGraph, simple_cycles

PRIMAL = "primal"
DUAL = "dual"

# G+ edges beyond this count skip the all-cycles Kasteleyn check by default
CYCLE_CHECK_BOUND = 30


class NotQConnected(ValueError):
    pass


class NotKasteleyn(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class NotInImage(ValueError):
    pass


class GPlusEdge(NamedTuple):
    white: int
    black: int
    kind: str        # PRIMAL or DUAL
    source: Dart     # PRIMAL: dart of G leaving the black endpoint;
                     # DUAL: dart of G with the black face on its left


class Corner(NamedTuple):
    """A bounded quadrilateral face of G+: ``x -> w_out -> f -> w_in -> x``
    traversed counterclockwise (``edges`` in that order)."""

    vertex: str
    face: int
    edges: tuple[int, int, int, int]


@dataclass(frozen=True)
class GPlusOrientation:
    positive: tuple[bool, ...]

    def flipped(self, edges) -> "GPlusOrientation":
        pos = list(self.positive)
        for e in edges:
            pos[e] = not pos[e]
        return GPlusOrientation(tuple(pos))


@dataclass(frozen=True, order=True)
class Matching:
    """A perfect matching, stored as the G+ edge used at each white vertex."""

    by_white: tuple[int, ...]

    @property
    def edges(self) -> frozenset[int]:
        return frozenset(self.by_white)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.by_white))


class GPlusGraph:
    def __init__(self, g: EmbeddedPlanarGraph):
        self.source = g
        self.root = g.root
        self.whites = [e.id for e in g.edges]
        self.black_vertices = [v for v in g.vertices if v != g.root]
        self.black_faces = [i for i in range(len(g.faces)) if i != g.outer]
        self.blacks: list[tuple[str, Any]] = (
            [("vertex", v) for v in self.black_vertices]
            + [("face", i) for i in self.black_faces])
        self._vertex_black = {v: k for k, v in enumerate(self.black_vertices)}
        self._face_black = {f: len(self.black_vertices) + k for k, f in enumerate(self.black_faces)}

        edges: list[GPlusEdge] = []
        for i, e in enumerate(g.edges):
            fwd = Dart(i, False)
            for d in (fwd, fwd.reversed()):
                x = g.tail(d)
                if x != g.root:
                    edges.append(GPlusEdge(i, self._vertex_black[x], PRIMAL, d))
            for d in (fwd, fwd.reversed()):
                f = g.left_face(d)
                if f != g.outer:
                    edges.append(GPlusEdge(i, self._face_black[f], DUAL, d))
        self.edges = edges
        self._primal = {(e.white, e.source): k for k, e in enumerate(edges) if e.kind == PRIMAL}
        self._dual = {(e.white, e.source): k for k, e in enumerate(edges) if e.kind == DUAL}
        self.white_adj: list[list[int]] = [[] for _ in self.whites]
        self.black_adj: list[list[int]] = [[] for _ in self.blacks]
        for k, e in enumerate(edges):
            self.white_adj[e.white].append(k)
            self.black_adj[e.black].append(k)
        self.corners = self._corners()

    # -- lookups ---------------------------------------------------------------
    @property
    def n_white(self) -> int:
        return len(self.whites)

    @property
    def n_black(self) -> int:
        return len(self.blacks)

    @property
    def n_vertices(self) -> int:
        return self.n_white + self.n_black

    def white_name(self, w: int) -> str:
        return f"w:{self.whites[w]}"

    def black_name(self, b: int) -> str:
        kind, tag = self.blacks[b]
        return f"v:{tag}" if kind == "vertex" else f"f:{self.source.faces[tag].id}"

    def vertex_black(self, v: str) -> int | None:
        return self._vertex_black.get(v)

    def face_black(self, f: int) -> int | None:
        return self._face_black.get(f)

    def primal_half(self, d: Dart) -> int | None:
        """G+ edge from w(d.edge) to the *tail* of ``d``, if it survives."""
        return self._primal.get((d.edge, d))

    def dual_half(self, d: Dart) -> int | None:
        """G+ edge from w(d.edge) to the face left of ``d``, if it survives."""
        return self._dual.get((d.edge, d))

    def edge_label(self, k: int) -> str:
        e = self.edges[k]
        return f"{self.white_name(e.white)}-{self.black_name(e.black)}"

    def _corners(self) -> list[Corner]:
        g = self.source
        out = []
        for fi, face in enumerate(g.faces):
            if fi == g.outer:
                continue
            b = face.boundary
            for k, d_in in enumerate(b):
                d_out = b[(k + 1) % len(b)]
                x = g.head(d_in)
                if x == g.root:
                    continue
                quad = (self.primal_half(d_out), self.dual_half(d_out),
                        self.dual_half(d_in), self.primal_half(d_in.reversed()))
                assert None not in quad
                out.append(Corner(x, fi, quad))
        return out

    def edge_corners(self) -> list[list[int]]:
        """For each G+ edge, the bounded corners containing it (length <= 2);
        a missing side is the outer face of G+."""
        sides: list[list[int]] = [[] for _ in self.edges]
        for c, corner in enumerate(self.corners):
            for k in corner.edges:
                sides[k].append(c)
        return sides

    def rotation(self) -> dict[str, list[int]]:
        """Counterclockwise order of G+ edges around every G+ vertex."""
        g = self.source
        rot: dict[str, list[int]] = {}
        for i in range(len(self.whites)):
            fwd = Dart(i, False)
            ring = [self.primal_half(fwd.reversed()), self.dual_half(fwd),
                    self.primal_half(fwd), self.dual_half(fwd.reversed())]
            rot[self.white_name(i)] = [k for k in ring if k is not None]
        for v in self.black_vertices:
            rot[self.black_name(self._vertex_black[v])] = [
                self.primal_half(d) for d in g.rotation[v]]
        for f in self.black_faces:
            rot[self.black_name(self._face_black[f])] = [
                self.dual_half(d) for d in g.faces[f].boundary]
        return rot

    def coordinates(self) -> dict[str, tuple[Fraction, Fraction]] | None:
        g = self.source
        if g.coords is None:
            return None
        out = {}
        for i, e in enumerate(g.edges):
            (x0, y0), (x1, y1) = g.coords[e.u], g.coords[e.v]
            out[self.white_name(i)] = ((x0 + x1) / 2, (y0 + y1) / 2)
        for v in self.black_vertices:
            out[self.black_name(self._vertex_black[v])] = g.coords[v]
        for f in self.black_faces:
            pts = [g.coords[g.tail(d)] for d in g.faces[f].boundary]
            out[self.black_name(self._face_black[f])] = (
                sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
        return out

    def to_document(self) -> dict[str, Any]:
        """G+ in the graph document format, with provenance tags."""
        from .planar import Edge, trace_faces, _format_fraction

        g = self.source
        coords = self.coordinates()
        names = [self.white_name(w) for w in range(self.n_white)] + \
                [self.black_name(b) for b in range(self.n_black)]
        vertices = []
        for w in range(self.n_white):
            vertices.append({"id": names[w], "color": "white", "source": {"edge": self.whites[w]}})
        for b, (kind, tag) in enumerate(self.blacks):
            src = {"vertex": tag} if kind == "vertex" else {"face": g.faces[tag].id}
            vertices.append({"id": names[self.n_white + b], "color": "black", "source": src})
        if coords is not None:
            for item in vertices:
                x, y = coords[item["id"]]
                item["x"], item["y"] = _format_fraction(x), _format_fraction(y)
        edge_ids = [f"h{k}" for k in range(len(self.edges))]
        edges = [{"id": edge_ids[k], "u": self.white_name(e.white),
                  "v": self.black_name(e.black), "kind": e.kind}
                 for k, e in enumerate(self.edges)]
        rot = {name: [edge_ids[k] for k in ring] for name, ring in self.rotation().items()}

        # locate the outer face among the traced faces: the one that is not a corner
        plain = [Edge(edge_ids[k], self.white_name(e.white), self.black_name(e.black))
                 for k, e in enumerate(self.edges)]
        darts = {}
        for name, ring in self.rotation().items():
            darts[name] = tuple(Dart(k, plain[k].u != name) for k in ring)
        faces = trace_faces(plain, darts)
        corner_sets = {frozenset(c.edges) for c in self.corners}
        outer = [f for f in faces if frozenset(d.edge for d in f.boundary) not in corner_sets
                 or len(f.boundary) != 4]
        doc: dict[str, Any] = {
            "name": f"{g.name}+",
            "vertices": vertices,
            "edges": edges,
            "rotation": rot,
        }
        if len(outer) == 1:
            boundary = outer[0].boundary

            def tail(d):
                return plain[d.edge].v if d.backward else plain[d.edge].u

            doc["root"] = tail(boundary[0])
            doc["outer_face"] = [[edge_ids[d.edge], tail(d)] for d in boundary]
        else:
            doc["root"] = None
        return doc


def construct_gplus(g: EmbeddedPlanarGraph) -> GPlusGraph:
    return GPlusGraph(g)


# -- matchings ------------------------------------------------------------------

def enumerate_matchings(h: GPlusGraph) -> list[Matching]:
    """All perfect matchings, by backtracking on the uncovered white vertex
    with the fewest available edges."""
    if h.n_white != h.n_black:
        return []
    used_black = [False] * h.n_black
    chosen: list[int | None] = [None] * h.n_white
    found: list[Matching] = []

    def options(w):
        return [k for k in h.white_adj[w] if not used_black[h.edges[k].black]]

    def search(left: int) -> None:
        if left == 0:
            found.append(Matching(tuple(chosen)))
            return
        best, best_opts = None, None
        for w in range(h.n_white):
            if chosen[w] is None:
                opts = options(w)
                if best_opts is None or len(opts) < len(best_opts):
                    best, best_opts = w, opts
                    if not opts:
                        return
        for k in best_opts:
            b = h.edges[k].black
            used_black[b] = True
            chosen[best] = k
            search(left - 1)
            chosen[best] = None
            used_black[b] = False

    search(h.n_white)
    found.sort(key=Matching.key)
    return found


def is_perfect_matching(h: GPlusGraph, m: Matching) -> bool:
    if len(m.by_white) != h.n_white:
        return False
    blacks = []
    for w, k in enumerate(m.by_white):
        if not 0 <= k < len(h.edges) or h.edges[k].white != w:
            return False
        blacks.append(h.edges[k].black)
    return sorted(blacks) == list(range(h.n_black))


# -- Kasteleyn orientation and matrix ----------------------------------------------

def induced_kasteleyn_orientation(o: Orientation, h: GPlusGraph) -> GPlusOrientation:
    """Primal halves follow ``o``; dual halves turn counterclockwise, i.e. the
    dual edge runs from the face right of the directed primal edge to the face
    on its left."""
    g = h.source
    if not is_q_connected(g, o):
        raise NotQConnected("orientation is not q-connected")
    pos = []
    for e in h.edges:
        d = o.dart(e.white)
        if e.kind == PRIMAL:
            pos.append(g.tail(e.source) == g.head(d))
        else:
            pos.append(e.source == d)
    return GPlusOrientation(tuple(pos))


def corner_clockwise(ko: GPlusOrientation, corner: Corner) -> int:
    """Clockwise edges on a corner quad ``x -> w_out -> f -> w_in -> x``."""
    a, b, c, d = (ko.positive[k] for k in corner.edges)
    # positive = white->black; traversal runs b->w, w->b, b->w, w->b
    return int(a) + int(not b) + int(c) + int(not d)


def _mod4_rule(length: int, positives: int) -> bool:
    if length % 4 == 0:
        return positives % 2 == 1
    return positives % 2 == 0


def enclosed_vertices(h: GPlusGraph, cycle_edges: set[int], sides: list[list[int]] | None = None) -> int:
    """Number of G+ vertices strictly inside a simple cycle of G+."""
    sides = sides if sides is not None else h.edge_corners()
    outer = -1
    nbrs: dict[int, list[int]] = {}
    for k, s in enumerate(sides):
        if k in cycle_edges:
            continue
        a, b = (s + [outer, outer])[:2]
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    reach = {outer}
    queue = deque([outer])
    while queue:
        for y in nbrs.get(queue.popleft(), []):
            if y not in reach:
                reach.add(y)
                queue.append(y)
    on_cycle = set()
    for k in cycle_edges:
        on_cycle.add(("w", h.edges[k].white))
        on_cycle.add(("b", h.edges[k].black))
    inside = set()
    for k, s in enumerate(sides):
        if any(c not in reach for c in s):
            for v in (("w", h.edges[k].white), ("b", h.edges[k].black)):
                if v not in on_cycle:
                    inside.add(v)
    return len(inside)


def gplus_cycles(h: GPlusGraph) -> list[list[Dart]]:
    """Simple cycles of G+, as darts over G+ edge indices (white = first end)."""
    ends = [(e.white, h.n_white + e.black) for e in h.edges]
    return simple_cycles(h.n_vertices, ends)


def is_kasteleyn_orientation(ko: GPlusOrientation, h: GPlusGraph,
                             all_cycles: bool | None = None) -> bool:
    """Every bounded face of G+ has an odd number of clockwise edges.

    With ``all_cycles`` (default: when G+ has at most ``CYCLE_CHECK_BOUND``
    edges) every simple cycle C is checked too: C must have an odd number of
    clockwise edges whenever it encloses an even number of vertices, and in
    general ``cw(C) = 1 + enclosed(C) (mod 2)``.  The mod-4 restatement in
    terms of positive edges is asserted alongside.
    """
    if len(ko.positive) != len(h.edges):
        return False
    for corner in h.corners:
        cw = corner_clockwise(ko, corner)
        positives = sum(ko.positive[k] for k in corner.edges)
        assert (cw % 2 == 1) == _mod4_rule(4, positives)
        if cw % 2 == 0:
            return False
    if all_cycles is None:
        all_cycles = len(h.edges) <= CYCLE_CHECK_BOUND
    if all_cycles:
        sides = h.edge_corners()
        for cycle in gplus_cycles(h):
            ell = len(cycle)
            positives = sum(ko.positive[d.edge] for d in cycle)
            # clockwise parity of an even cycle does not depend on direction
            cw_parity = (ell // 2 + positives) % 2
            assert (cw_parity == 1) == _mod4_rule(ell, positives)
            inside = enclosed_vertices(h, {d.edge for d in cycle}, sides)
            if cw_parity != (1 + inside) % 2:
                return False
    return True


def kasteleyn_matrix(ko: GPlusOrientation, h: GPlusGraph, check: bool = True) -> Matrix:
    """Rows are black vertices, columns white vertices; +1 for a positive
    edge, -1 for a negative one."""
    if check and not is_kasteleyn_orientation(ko, h, all_cycles=False):
        raise NotKasteleyn("orientation fails the face condition")
    K = [[0] * h.n_white for _ in range(h.n_black)]
    for k, e in enumerate(h.edges):
        K[e.black][e.white] += 1 if ko.positive[k] else -1
    return K


def kasteleyn_cokernel(K: Matrix) -> Cokernel:
    """White-vertex divisors modulo the row lattice of ``K``."""
    if not K or len(K) != len(K[0]):
        raise ValueError("Kasteleyn matrix must be square")
    if determinant(K) == 0:
        raise SingularMatrix("Kasteleyn matrix is singular; G+ has no perfect matching")
    return Cokernel(K)


# -- Temperley bijection --------------------------------------------------------------

def temperley(t: SpanningTree, h: GPlusGraph, o: Orientation | None = None) -> Matching:
    """Match w(e) through the positive primal half (tree edges) or the
    positive dual half (non-tree edges) of the induced orientation."""
    g = h.source
    o = o or q_connected_orientation(g, t)
    by_white = []
    for i in range(g.n_edges):
        d = o.dart(i)
        k = h.primal_half(d.reversed()) if i in t else h.dual_half(d)
        if k is None:
            raise NotInImage(f"edge {g.edges[i].id!r} has no surviving positive half")
        by_white.append(k)
    return Matching(tuple(by_white))


def temperley_inverse(m: Matching, h: GPlusGraph) -> SpanningTree:
    """The tree of primal-matched white vertices, checked against the forward map."""
    t = SpanningTree(w for w, k in enumerate(m.by_white) if h.edges[k].kind == PRIMAL)
    if not is_spanning_tree(h.source, t) or temperley(t, h) != m:
        raise NotInImage("matching is not the image of a spanning tree")
    return t


def temperley_table(h: GPlusGraph, trees) -> Iterator[tuple[tuple[int, ...], Matching]]:
    for t in trees:
        yield tree_key(t), temperley(t, h)
