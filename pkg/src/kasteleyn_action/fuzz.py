"""Random bridgeless embedded planar graphs.

Graphs start as stacked triangulations with exact rational coordinates, so
every intermediate drawing is straight-line planar.  Edges are then deleted
at random as long as the graph stays 2-edge-connected, and the root is drawn
from the outer face.  Everything is a function of the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Iterator

from .planar import EmbeddedPlanarGraph, _format_fraction, build_graph

MIN_EDGES = 3


def _bridgeless(n: int, edges: list[tuple[int, int]]) -> bool:
    """Connected and no bridges (Tarjan low-link)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (a, b) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    disc = [-1] * n
    low = [0] * n
    clock = 0
    # iterative DFS: (vertex, edge used to enter, iterator position)
    stack = [(0, -1, 0)]
    disc[0] = low[0] = clock
    while stack:
        v, via, pos = stack[-1]
        if pos < len(adj[v]):
            stack[-1] = (v, via, pos + 1)
            w, k = adj[v][pos]
            if k == via:
                continue
            if disc[w] < 0:
                clock += 1
                disc[w] = low[w] = clock
                stack.append((w, k, 0))
            else:
                low[v] = min(low[v], disc[w])
        else:
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    return False
    return all(x >= 0 for x in disc)


def _stacked_triangulation(rng: random.Random, n: int):
    pts = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    tris = [(0, 1, 2)]
    edges = {(0, 1), (1, 2), (0, 2)}
    while len(pts) < n:
        a, b, c = tris.pop(rng.randrange(len(tris)))
        wa, wb, wc = (rng.randint(1, 4) for _ in range(3))
        s = wa + wb + wc
        p = tuple((wa * pts[a][i] + wb * pts[b][i] + wc * pts[c][i]) / s for i in range(2))
        k = len(pts)
        pts.append(p)
        tris.extend([(a, b, k), (b, c, k), (c, a, k)])
        edges.update({(a, k), (b, k), (c, k)})
    return pts, sorted(edges)


def random_document(rng: random.Random, max_edges: int, name: str) -> dict[str, Any]:
    if max_edges < MIN_EDGES:
        raise ValueError(f"max_edges must be at least {MIN_EDGES}")
    while True:
        n = rng.randint(3, max(3, (max_edges + 2) // 2))
        pts, edges = _stacked_triangulation(rng, n)
        target = rng.randint(min(n, max_edges), max_edges)
        order = list(range(len(edges)))
        rng.shuffle(order)
        alive = set(range(len(edges)))
        for k in order:
            if len(alive) <= target:
                break
            trial = [edges[j] for j in sorted(alive - {k})]
            if _bridgeless(n, trial):
                alive.discard(k)
        if len(alive) <= max_edges:
            break
    kept = [edges[j] for j in sorted(alive)]
    doc: dict[str, Any] = {
        "name": name,
        "vertices": [{"id": f"v{i}", "x": _format_fraction(x), "y": _format_fraction(y)}
                     for i, (x, y) in enumerate(pts)],
        "edges": [{"id": f"e{k}", "u": f"v{a}", "v": f"v{b}"} for k, (a, b) in enumerate(kept)],
        "root": "v0",
    }
    g = build_graph(doc)
    outer = sorted({g.tail(d) for d in g.outer_face.boundary}, key=g.vertex_index.get)
    doc["root"] = rng.choice(outer)
    return doc


def random_graph(seed: int, index: int, max_edges: int) -> EmbeddedPlanarGraph:
    rng = random.Random(f"{seed}:{index}")
    return build_graph(random_document(rng, max_edges, f"fuzz-{seed}-{index}"))


def random_graphs(seed: int, count: int, max_edges: int) -> Iterator[EmbeddedPlanarGraph]:
    for i in range(count):
        yield random_graph(seed, i, max_edges)
