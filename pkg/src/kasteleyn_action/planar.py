"""Embedded planar graphs given by rotation systems.

A graph is stored combinatorially: every edge ``e = (u, v)`` contributes two
darts, ``Dart(e, False)`` running u -> v and ``Dart(e, True)`` running v -> u.
The rotation at a vertex lists its outgoing darts in counterclockwise order.
Faces are traced so that the face lies to the *left* of every boundary dart;
bounded faces therefore come out counterclockwise and the outer face
clockwise.

Coordinates are optional.  When present they are exact rationals and are used
to derive the rotation (angular sort), to pick the outer face, and to
cross-check :meth:`EmbeddedPlanarGraph.is_ccw`.
"""

from __future__ import annotations

import json
from collections import deque
from decimal import Decimal
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, Iterable, NamedTuple, Sequence


class GraphError(ValueError):
    """Base class for invalid graph documents.

    ``location`` names the offending part of the input document, e.g.
    ``"edges[3]"``, when one can be identified.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class DocumentError(GraphError):
    pass


class NotConnected(GraphError):
    pass


class HasSelfLoop(GraphError):
    pass


class HasBridge(GraphError):
    pass


class RootNotOnOuterFace(GraphError):
    pass


class AmbiguousRotation(GraphError):
    pass


class NonPlanarRotation(GraphError):
    pass


class NotACycle(ValueError):
    pass


class Dart(NamedTuple):
    edge: int
    backward: bool = False

    def reversed(self) -> "Dart":
        return Dart(self.edge, not self.backward)


class Edge(NamedTuple):
    id: str
    u: str
    v: str


class Face(NamedTuple):
    id: str
    boundary: tuple[Dart, ...]


class DualGraph(NamedTuple):
    """Planar dual: one vertex per face, one edge per primal edge.

    ``edges[i]`` is ``(primal edge id, left face id, right face id)`` where
    left/right are taken with respect to the forward dart of primal edge i.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]


def _to_fraction(value: Any, location: str) -> Fraction:
    try:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return Fraction(int(value[0]), int(value[1]))
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, float):
            return Fraction(Decimal(repr(value)))
        if isinstance(value, Decimal):
            return Fraction(value)
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DocumentError(f"not an exact number: {value!r}", location) from None


def _format_fraction(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _half(dx: Fraction, dy: Fraction) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _angle_cmp(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> int:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _normalize_cycle(seq: Sequence[Dart]) -> tuple[Dart, ...]:
    i = min(range(len(seq)), key=seq.__getitem__)
    return tuple(seq[i:]) + tuple(seq[:i])


def shoelace_area(points: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """Twice the signed area of a polygon (positive when counterclockwise)."""
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


class EmbeddedPlanarGraph:
    """A connected, bridgeless, loopless plane multigraph with a root on the
    outer face.  Instances are immutable once built; use :func:`parse_graph`
    or :func:`build_graph` rather than calling the constructor directly.
    """

    def __init__(self, name: str, vertices: Sequence[str], edges: Sequence[Edge],
                 rotation: dict[str, tuple[Dart, ...]], root: str,
                 coords: dict[str, tuple[Fraction, Fraction]] | None,
                 faces: Sequence[Face], outer: int):
        self.name = name
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.rotation = dict(rotation)
        self.root = root
        self.coords = coords
        self.faces = tuple(faces)
        self.outer = outer
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.edge_index = {e.id: i for i, e in enumerate(self.edges)}
        self.face_index = {f.id: i for i, f in enumerate(self.faces)}
        self._face_of: dict[Dart, int] = {}
        for i, f in enumerate(self.faces):
            for d in f.boundary:
                self._face_of[d] = i

    # -- darts -------------------------------------------------------------
    def tail(self, d: Dart) -> str:
        e = self.edges[d.edge]
        return e.v if d.backward else e.u

    def head(self, d: Dart) -> str:
        e = self.edges[d.edge]
        return e.u if d.backward else e.v

    def dart(self, edge: int, tail: str) -> Dart:
        e = self.edges[edge]
        if tail == e.u:
            return Dart(edge, False)
        if tail == e.v:
            return Dart(edge, True)
        raise ValueError(f"{tail!r} is not an endpoint of edge {e.id!r}")

    def left_face(self, d: Dart) -> int:
        """Index of the face lying to the left of ``d``."""
        return self._face_of[d]

    def right_face(self, d: Dart) -> int:
        return self._face_of[d.reversed()]

    # -- counts ------------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def genus(self) -> int:
        """Combinatorial genus (cycle rank) ``|E| - |V| + 1``."""
        return self.n_edges - self.n_vertices + 1

    @property
    def outer_face(self) -> Face:
        return self.faces[self.outer]

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def incident_edges(self, v: str) -> list[int]:
        return [d.edge for d in self.rotation[v]]

    @property
    def has_parallel_edges(self) -> bool:
        seen = set()
        for e in self.edges:
            key = frozenset((e.u, e.v))
            if key in seen:
                return True
            seen.add(key)
        return False

    @property
    def has_straight_line_drawing(self) -> bool:
        """True when coordinates exist and realize the stored rotation."""
        if self.coords is None or self.has_parallel_edges:
            return False
        derived = _rotation_from_coords(self.vertices, self.edges, self.coords)
        return all(_normalize_cycle(derived[v]) == self.rotation[v]
                   for v in self.vertices)

    # -- geometry-free predicates ------------------------------------------
    def dual(self) -> DualGraph:
        """The planar dual; the outer face is an ordinary dual vertex."""
        edges = []
        for i, e in enumerate(self.edges):
            left = self.faces[self.left_face(Dart(i, False))].id
            right = self.faces[self.right_face(Dart(i, False))].id
            if left == right:
                raise HasBridge(f"edge {e.id!r} is a bridge")
            edges.append((e.id, left, right))
        return DualGraph(tuple(f.id for f in self.faces), tuple(edges))

    def check_cycle(self, cycle: Sequence[Dart]) -> None:
        if len(cycle) < 2:
            raise NotACycle("a cycle needs at least two darts")
        seen_v, seen_e = set(), set()
        for i, d in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)]
            if self.head(d) != self.tail(nxt):
                raise NotACycle(f"dart {i} does not continue into dart {i + 1}")
            if d.edge in seen_e or self.tail(d) in seen_v:
                raise NotACycle("cycle is not simple")
            seen_e.add(d.edge)
            seen_v.add(self.tail(d))

    def enclosed_faces(self, cycle: Sequence[Dart]) -> set[int]:
        """Faces separated from the outer face by the edges of ``cycle``."""
        blocked = {d.edge for d in cycle}
        reach = {self.outer}
        queue = deque([self.outer])
        while queue:
            f = queue.popleft()
            for d in self.faces[f].boundary:
                if d.edge in blocked:
                    continue
                g = self.right_face(d)
                if g not in reach:
                    reach.add(g)
                    queue.append(g)
        return set(range(len(self.faces))) - reach

    def is_ccw(self, cycle: Sequence[Dart]) -> bool:
        """Whether the simple directed cycle keeps its interior on the left."""
        self.check_cycle(cycle)
        inside = self.enclosed_faces(cycle)
        sides = {self.left_face(d) in inside for d in cycle}
        assert len(sides) == 1, "left faces of a simple cycle straddle it"
        return sides.pop()

    def signed_area(self, cycle: Sequence[Dart]) -> Fraction:
        if self.coords is None:
            raise ValueError("graph has no coordinates")
        return shoelace_area([self.coords[self.tail(d)] for d in cycle])

    # -- serialization -----------------------------------------------------
    def to_document(self) -> dict[str, Any]:
        def dart_spec(d: Dart) -> list[str]:
            return [self.edges[d.edge].id, self.tail(d)]

        vertices = []
        for v in self.vertices:
            item: dict[str, Any] = {"id": v}
            if self.coords is not None:
                x, y = self.coords[v]
                item["x"] = _format_fraction(x)
                item["y"] = _format_fraction(y)
            vertices.append(item)
        return {
            "name": self.name,
            "vertices": vertices,
            "edges": [{"id": e.id, "u": e.u, "v": e.v} for e in self.edges],
            "root": self.root,
            "rotation": {v: [self.edges[d.edge].id for d in self.rotation[v]]
                         for v in self.vertices},
            "outer_face": [dart_spec(d) for d in self.outer_face.boundary],
        }

    def canonical_text(self) -> str:
        return json.dumps(self.to_document(), indent=2) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddedPlanarGraph):
            return NotImplemented
        return self.to_document() == other.to_document() and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.canonical_text())

    def __repr__(self) -> str:
        return (f"EmbeddedPlanarGraph({self.name!r}, V={self.n_vertices}, "
                f"E={self.n_edges}, F={len(self.faces)}, root={self.root!r})")


def _rotation_from_coords(vertices, edges, coords) -> dict[str, list[Dart]]:
    out: dict[str, list[Dart]] = {v: [] for v in vertices}
    for i, e in enumerate(edges):
        out[e.u].append(Dart(i, False))
        out[e.v].append(Dart(i, True))
    rotation = {}
    for v, darts in out.items():
        x0, y0 = coords[v]

        def direction(d: Dart) -> tuple[Fraction, Fraction]:
            e = edges[d.edge]
            w = e.u if d.backward else e.v
            return (coords[w][0] - x0, coords[w][1] - y0)

        rotation[v] = sorted(darts, key=cmp_to_key(lambda a, b: _angle_cmp(direction(a), direction(b))))
    return rotation


def trace_faces(edges: Sequence[Edge], rotation: dict[str, Sequence[Dart]]) -> list[Face]:
    """Trace face boundaries of a rotation system.

    The successor of dart ``d = (u -> v)`` is the dart preceding ``reverse(d)``
    in the counterclockwise rotation at ``v``, which keeps the face on the
    left.  Faces are returned sorted by their smallest dart and named
    ``f0, f1, ...`` in that order.
    """
    position = {}
    for v, darts in rotation.items():
        for k, d in enumerate(darts):
            position[d] = (v, k)

    def successor(d: Dart) -> Dart:
        v, k = position[d.reversed()]
        ring = rotation[v]
        return ring[(k - 1) % len(ring)]

    seen: set[Dart] = set()
    cycles = []
    for d in sorted(position):
        if d in seen:
            continue
        walk = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            walk.append(cur)
            cur = successor(cur)
        cycles.append(_normalize_cycle(walk))
    cycles.sort()
    return [Face(f"f{i}", c) for i, c in enumerate(cycles)]


def _connected(vertices: Sequence[str], edges: Sequence[Edge]) -> bool:
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    start = vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def build_graph(doc: dict[str, Any]) -> EmbeddedPlanarGraph:
    """Validate a decoded graph document and build the embedded graph."""
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    for key in ("vertices", "edges", "root"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    name = str(doc.get("name", "unnamed"))

    vertices: list[str] = []
    coords: dict[str, tuple[Fraction, Fraction]] | None = {}
    for i, item in enumerate(doc["vertices"]):
        loc = f"vertices[{i}]"
        if not isinstance(item, dict) or "id" not in item:
            raise DocumentError("vertex needs an 'id'", loc)
        v = str(item["id"])
        if v in vertices:
            raise DocumentError(f"duplicate vertex id {v!r}", loc)
        vertices.append(v)
        has_x, has_y = "x" in item, "y" in item
        if has_x != has_y:
            raise DocumentError("give both x and y or neither", loc)
        if coords is not None and has_x:
            coords[v] = (_to_fraction(item["x"], loc + ".x"), _to_fraction(item["y"], loc + ".y"))
        else:
            coords = None
    if not vertices:
        raise DocumentError("graph has no vertices", "vertices")

    edges: list[Edge] = []
    edge_ids: set[str] = set()
    for i, item in enumerate(doc["edges"]):
        loc = f"edges[{i}]"
        if not isinstance(item, dict) or not {"id", "u", "v"} <= item.keys():
            raise DocumentError("edge needs 'id', 'u' and 'v'", loc)
        e = Edge(str(item["id"]), str(item["u"]), str(item["v"]))
        if e.id in edge_ids:
            raise DocumentError(f"duplicate edge id {e.id!r}", loc)
        for end in (e.u, e.v):
            if end not in vertices:
                raise DocumentError(f"unknown vertex {end!r}", loc)
        if e.u == e.v:
            raise HasSelfLoop(f"edge {e.id!r} is a self-loop", loc)
        edge_ids.add(e.id)
        edges.append(e)

    root = str(doc["root"])
    if root not in vertices:
        raise DocumentError(f"unknown root vertex {root!r}", "root")
    if not _connected(vertices, edges):
        raise NotConnected("graph is not connected")
    if not edges:
        raise DocumentError("graph has no edges", "edges")

    edge_pos = {e.id: i for i, e in enumerate(edges)}
    incident: dict[str, set[Dart]] = {v: set() for v in vertices}
    for i, e in enumerate(edges):
        incident[e.u].add(Dart(i, False))
        incident[e.v].add(Dart(i, True))

    parallel = len({frozenset((e.u, e.v)) for e in edges}) < len(edges)
    if doc.get("rotation") is not None:
        raw = doc["rotation"]
        rotation = {}
        for v in vertices:
            loc = f"rotation.{v}"
            if v not in raw:
                raise DocumentError("missing rotation for vertex", loc)
            darts = []
            for eid in raw[v]:
                eid = str(eid)
                if eid not in edge_pos:
                    raise DocumentError(f"unknown edge {eid!r}", loc)
                e = edges[edge_pos[eid]]
                if v not in (e.u, e.v):
                    raise DocumentError(f"edge {eid!r} is not incident to {v!r}", loc)
                darts.append(Dart(edge_pos[eid], e.u != v))
            if len(darts) != len(set(darts)) or set(darts) != incident[v]:
                raise DocumentError("rotation must list every incident edge exactly once", loc)
            rotation[v] = _normalize_cycle(darts)
        extra = set(map(str, raw)) - set(vertices)
        if extra:
            raise DocumentError(f"rotation names unknown vertices {sorted(extra)}", "rotation")
    else:
        if parallel:
            raise AmbiguousRotation("parallel edges need an explicit rotation", "rotation")
        if coords is None:
            raise DocumentError("either coordinates or an explicit rotation is required", "rotation")
        rotation = {v: _normalize_cycle(ds)
                    for v, ds in _rotation_from_coords(vertices, edges, coords).items()}

    faces = trace_faces(edges, rotation)
    if len(vertices) - len(edges) + len(faces) != 2:
        raise NonPlanarRotation(
            f"Euler check failed: V - E + F = {len(vertices)} - {len(edges)} + {len(faces)}",
            "rotation")

    face_of = {d: i for i, f in enumerate(faces) for d in f.boundary}
    for i, e in enumerate(edges):
        if face_of[Dart(i, False)] == face_of[Dart(i, True)]:
            raise HasBridge(f"edge {e.id!r} is a bridge", f"edges[{i}]")

    if doc.get("outer_face") is not None:
        loc = "outer_face"
        specs = doc["outer_face"]
        if not specs:
            raise DocumentError("outer_face is empty", loc)
        found = set()
        for spec in specs:
            if not isinstance(spec, (list, tuple)) or len(spec) != 2:
                raise DocumentError(f"dart spec must be [edge id, tail vertex], got {spec!r}", loc)
            eid, tail = str(spec[0]), str(spec[1])
            if eid not in edge_pos:
                raise DocumentError(f"unknown edge {eid!r}", loc)
            e = edges[edge_pos[eid]]
            if tail not in (e.u, e.v):
                raise DocumentError(f"{tail!r} is not an endpoint of {eid!r}", loc)
            found.add(face_of[Dart(edge_pos[eid], tail != e.u)])
        if len(found) != 1:
            raise DocumentError("outer_face darts do not bound a single face", loc)
        outer = found.pop()
        if len(specs) != len(faces[outer].boundary):
            raise DocumentError("outer_face must list the whole boundary walk", loc)
    elif coords is not None and not parallel:
        def area(f: Face) -> Fraction:
            pts = []
            for d in f.boundary:
                e = edges[d.edge]
                pts.append(coords[e.v if d.backward else e.u])
            return shoelace_area(pts)

        negative = [i for i, f in enumerate(faces) if area(f) < 0]
        if len(negative) != 1:
            raise NonPlanarRotation("coordinates do not give a straight-line plane drawing")
        outer = negative[0]
    else:
        raise AmbiguousRotation("outer_face must be given explicitly", "outer_face")

    on_outer = False
    for d in faces[outer].boundary:
        e = edges[d.edge]
        if (e.v if d.backward else e.u) == root:
            on_outer = True
    if not on_outer:
        raise RootNotOnOuterFace(f"root {root!r} is not on the outer face", "root")

    return EmbeddedPlanarGraph(name, vertices, edges, rotation, root,
                               coords or None, faces, outer)


def parse_graph(text: str) -> EmbeddedPlanarGraph:
    """Parse a JSON graph document.

    Non-integer numbers are read as exact decimals, so ``0.1`` means 1/10.
    """
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    return build_graph(doc)


def load_graph(path: str) -> EmbeddedPlanarGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def reverse_cycle(cycle: Iterable[Dart]) -> list[Dart]:
    return [d.reversed() for d in reversed(list(cycle))]


def simple_cycles(n_vertices: int, ends: Sequence[tuple[int, int]]) -> list[list[Dart]]:
    """All simple cycles of an undirected multigraph, one direction each.

    ``ends[i] = (a, b)`` gives the vertex indices of edge ``i``.  Each cycle
    is a dart list starting at its smallest vertex; of its two traversal
    directions the one whose first edge index is smaller than its last is
    returned.
    """
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(n_vertices)]
    for i, (a, b) in enumerate(ends):
        adj[a].append((i, b, False))
        adj[b].append((i, a, True))
    out: list[list[Dart]] = []

    def extend(start: int, at: int, path: list[Dart], on_path: set[int]) -> None:
        for edge, nxt, backward in adj[at]:
            if nxt == start:
                if path and path[0].edge < edge and edge != path[-1].edge:
                    out.append(path + [Dart(edge, backward)])
            elif nxt > start and nxt not in on_path:
                on_path.add(nxt)
                path.append(Dart(edge, backward))
                extend(start, nxt, path, on_path)
                path.pop()
                on_path.discard(nxt)

    for s in range(n_vertices):
        extend(s, s, [], {s})
    return out
