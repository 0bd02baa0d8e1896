"""Spanning trees, q-connected orientations and the Bernardi map."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .divisors import Divisor, Jacobian, JacobianElement
from .planar import Dart, EmbeddedPlanarGraph, simple_cycles

SpanningTree = frozenset  # of edge indices

EXHAUSTION_BOUND = 14


class TooLarge(ValueError):
    pass


class BadReferenceDegree(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Orientation:
    """Direction of every edge; ``forward[i]`` means edge i runs u -> v."""

    forward: tuple[bool, ...]

    @classmethod
    def from_code(cls, code: int, n_edges: int) -> "Orientation":
        return cls(tuple(bool((code >> i) & 1) for i in range(n_edges)))

    @classmethod
    def from_darts(cls, darts: Iterable[Dart], n_edges: int) -> "Orientation":
        fwd = [None] * n_edges
        for d in darts:
            fwd[d.edge] = not d.backward
        if None in fwd:
            raise ValueError("darts do not cover every edge")
        return cls(tuple(fwd))

    @property
    def code(self) -> int:
        return sum(1 << i for i, f in enumerate(self.forward) if f)

    def dart(self, edge: int) -> Dart:
        return Dart(edge, not self.forward[edge])

    def darts(self) -> list[Dart]:
        return [self.dart(i) for i in range(len(self.forward))]

    def head(self, g: EmbeddedPlanarGraph, edge: int) -> str:
        return g.head(self.dart(edge))

    def tail(self, g: EmbeddedPlanarGraph, edge: int) -> str:
        return g.tail(self.dart(edge))

    def flipped(self, edges: Iterable[int]) -> "Orientation":
        fwd = list(self.forward)
        for e in edges:
            fwd[e] = not fwd[e]
        return Orientation(tuple(fwd))

    def indegree(self, g: EmbeddedPlanarGraph) -> dict[str, int]:
        deg = {v: 0 for v in g.vertices}
        for i in range(len(self.forward)):
            deg[self.head(g, i)] += 1
        return deg

    def to_json(self, g: EmbeddedPlanarGraph) -> dict[str, str]:
        return {e.id: f"{self.tail(g, i)}>{self.head(g, i)}" for i, e in enumerate(g.edges)}

    @classmethod
    def from_json(cls, g: EmbeddedPlanarGraph, data: Mapping[str, str]) -> "Orientation":
        fwd = []
        for e in g.edges:
            tail, _, head = data[e.id].partition(">")
            if (tail, head) == (e.u, e.v):
                fwd.append(True)
            elif (tail, head) == (e.v, e.u):
                fwd.append(False)
            else:
                raise ValueError(f"bad direction {data[e.id]!r} for edge {e.id!r}")
        return cls(tuple(fwd))


def _is_forest(g: EmbeddedPlanarGraph, edges: Iterable[int]) -> bool:
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in edges:
        e = g.edges[i]
        a, b = find(g.vertex_index[e.u]), find(g.vertex_index[e.v])
        if a == b:
            return False
        parent[a] = b
    return True


def is_spanning_tree(g: EmbeddedPlanarGraph, t: Iterable[int]) -> bool:
    t = list(t)
    return len(t) == g.n_vertices - 1 and len(set(t)) == len(t) and _is_forest(g, t)


def enumerate_trees(g: EmbeddedPlanarGraph) -> list[SpanningTree]:
    """All spanning trees, in lexicographic order of their sorted edge indices."""
    return [SpanningTree(c) for c in combinations(range(g.n_edges), g.n_vertices - 1)
            if _is_forest(g, c)]


def tree_key(t: SpanningTree) -> tuple[int, ...]:
    return tuple(sorted(t))


def _tree_parents(g: EmbeddedPlanarGraph, t: SpanningTree) -> dict[str, Dart]:
    """For each non-root vertex, the tree dart from its parent into it."""
    adj: dict[str, list[int]] = {v: [] for v in g.vertices}
    for i in t:
        e = g.edges[i]
        adj[e.u].append(i)
        adj[e.v].append(i)
    into: dict[str, Dart] = {}
    queue = deque([g.root])
    seen = {g.root}
    while queue:
        x = queue.popleft()
        for i in sorted(adj[x]):
            d = g.dart(i, x)
            y = g.head(d)
            if y not in seen:
                seen.add(y)
                into[y] = d
                queue.append(y)
    return into


def _tree_path(into: Mapping[str, Dart], g: EmbeddedPlanarGraph, a: str, b: str) -> list[Dart]:
    """Darts of the tree path from ``a`` to ``b``."""
    def to_root(x):
        chain = [x]
        while x in into:
            x = g.tail(into[x])
            chain.append(x)
        return chain

    up_a, up_b = to_root(a), to_root(b)
    common = set(up_a) & set(up_b)
    lca = next(x for x in up_a if x in common)
    path = []
    x = a
    while x != lca:
        path.append(into[x].reversed())
        x = g.tail(into[x])
    down = []
    x = b
    while x != lca:
        down.append(into[x])
        x = g.tail(into[x])
    return path + down[::-1]


def fundamental_cycle(g: EmbeddedPlanarGraph, t: SpanningTree, d: Dart) -> list[Dart]:
    """The closed walk that crosses the non-tree dart ``d`` first and then
    returns through the tree."""
    if d.edge in t:
        raise ValueError("fundamental cycles are defined for non-tree edges")
    into = _tree_parents(g, t)
    return [d] + _tree_path(into, g, g.head(d), g.tail(d))


def q_connected_orientation(g: EmbeddedPlanarGraph, t: SpanningTree) -> Orientation:
    """Tree edges point away from the root; every other edge is directed so
    that its fundamental cycle runs counterclockwise."""
    if not is_spanning_tree(g, t):
        raise ValueError("not a spanning tree")
    into = _tree_parents(g, t)
    darts = list(into.values())
    for i in range(g.n_edges):
        if i in t:
            continue
        d = Dart(i, False)
        cycle = [d] + _tree_path(into, g, g.head(d), g.tail(d))
        darts.append(d if g.is_ccw(cycle) else d.reversed())
    return Orientation.from_darts(darts, g.n_edges)


def is_q_connected(g: EmbeddedPlanarGraph, o: Orientation) -> bool:
    out: dict[str, list[str]] = {v: [] for v in g.vertices}
    for i in range(g.n_edges):
        out[o.tail(g, i)].append(o.head(g, i))
    seen = {g.root}
    stack = [g.root]
    while stack:
        for y in out[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n_vertices


# -- reversal moves ----------------------------------------------------------

def undirected_cycles(g: EmbeddedPlanarGraph) -> list[list[Dart]]:
    ends = [(g.vertex_index[e.u], g.vertex_index[e.v]) for e in g.edges]
    return simple_cycles(g.n_vertices, ends)


def cut_edges(g: EmbeddedPlanarGraph, side: frozenset[str]) -> list[Dart]:
    """Darts leaving ``side`` across the cut it determines."""
    out = []
    for i, e in enumerate(g.edges):
        if (e.u in side) != (e.v in side):
            out.append(Dart(i, e.u not in side))
    return out


def directed_cycles(g: EmbeddedPlanarGraph, o: Orientation) -> list[list[Dart]]:
    found = []
    for c in undirected_cycles(g):
        for walk in (c, [d.reversed() for d in reversed(c)]):
            if all(o.dart(d.edge) == d for d in walk):
                found.append(walk)
    return found


def directed_cuts(g: EmbeddedPlanarGraph, o: Orientation) -> list[frozenset[str]]:
    """Vertex sets S (root excluded) whose cut edges are all directed the
    same way across the cut."""
    others = [v for v in g.vertices if v != g.root]
    found = []
    for mask in range(1, 1 << len(others)):
        side = frozenset(v for k, v in enumerate(others) if (mask >> k) & 1)
        darts = cut_edges(g, side)
        agree = [o.dart(d.edge) == d for d in darts]
        if darts and (all(agree) or not any(agree)):
            found.append(side)
    return found


def move_generators(g: EmbeddedPlanarGraph) -> tuple[list[int], list[int]]:
    """Bitmask generators for cycle and cut reversals.

    A generator ``(mask, bits)`` applies to orientation code ``o`` when
    ``o & mask == bits`` and then yields ``o ^ mask``.
    """
    masks, bits = [], []

    def add(darts):
        m = sum(1 << d.edge for d in darts)
        b = sum(1 << d.edge for d in darts if not d.backward)
        masks.extend((m, m))
        bits.extend((b, m ^ b))

    for c in undirected_cycles(g):
        add(c)
    others = [v for v in g.vertices if v != g.root]
    for mask in range(1, 1 << len(others)):
        side = frozenset(v for k, v in enumerate(others) if (mask >> k) & 1)
        add(cut_edges(g, side))
    return masks, bits


def clockwise_cycle_patterns(g: EmbeddedPlanarGraph) -> list[tuple[int, int]]:
    """``(mask, bits)`` per simple cycle: a code ``o`` has that cycle directed
    clockwise iff ``o & mask == bits``."""
    out = []
    for c in undirected_cycles(g):
        if not g.is_ccw(c):
            c = [d.reversed() for d in reversed(c)]
        # c now runs counterclockwise; its reverse is the clockwise walk
        out.append((sum(1 << d.edge for d in c), sum(1 << d.edge for d in c if d.backward)))
    return out


def has_clockwise_cycle(codes: np.ndarray, patterns: list[tuple[int, int]]) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros(codes.shape, dtype=bool)
    for mask, bits in patterns:
        out |= (codes & mask) == bits
    return out


@dataclass(frozen=True)
class OrientationClass:
    """A closure class of orientation codes under cycle and cut reversals.

    ``q_connected`` lists every member reachable from the root; a class with
    a directed cycle holds both directions of it, so this list is usually
    longer than one.  ``minimal`` keeps the q-connected members with no
    clockwise directed cycle, which is where the tree orientations live.
    """

    members: tuple[int, ...]
    q_connected: tuple[int, ...]
    minimal: tuple[int, ...]
    n_edges: int

    @property
    def representative(self) -> Orientation:
        if len(self.minimal) != 1:
            raise ValueError(f"class has {len(self.minimal)} minimal q-connected members")
        return Orientation.from_code(self.minimal[0], self.n_edges)


def orientation_classes(g: EmbeddedPlanarGraph, bound: int = EXHAUSTION_BOUND,
                        backend: str | None = None) -> list[OrientationClass]:
    """Partition all ``2**|E|`` orientations into reversal-closure classes."""
    if g.n_edges > bound:
        raise TooLarge(f"{g.n_edges} edges exceeds the exhaustion bound {bound}")
    masks, bits = move_generators(g)
    labels = kernels.closure_labels(g.n_edges, masks, bits, backend=backend)
    u = [g.vertex_index[e.u] for e in g.edges]
    v = [g.vertex_index[e.v] for e in g.edges]
    qconn = kernels.reachable_all(g.n_vertices, g.n_edges, u, v,
                                  g.vertex_index[g.root], backend=backend)
    cw = has_clockwise_cycle(np.arange(1 << g.n_edges), clockwise_cycle_patterns(g))
    order = np.argsort(labels, kind="stable")
    groups: dict[int, list[int]] = {}
    for code in order.tolist():
        groups.setdefault(int(labels[code]), []).append(code)
    out = []
    for label in sorted(groups):
        members = tuple(groups[label])
        qc = tuple(c for c in members if qconn[c])
        out.append(OrientationClass(members, qc, tuple(c for c in qc if not cw[c]), g.n_edges))
    return out


# -- Bernardi map --------------------------------------------------------------

def bernardi_divisor(g: EmbeddedPlanarGraph, o: Orientation) -> Divisor:
    """``v -> indeg(v) - 1``; its degree is ``genus - 1``."""
    return Divisor({v: k - 1 for v, k in o.indegree(g).items()})


def bernardi_class(g: EmbeddedPlanarGraph, o: Orientation, d0: Divisor,
                   jac: Jacobian | None = None) -> JacobianElement:
    if d0.degree != g.genus - 1:
        raise BadReferenceDegree(f"reference has degree {d0.degree}, expected {g.genus - 1}")
    jac = jac or Jacobian(g)
    return jac(bernardi_divisor(g, o) - d0)
