"""Bitmask kernels over all ``2**|E|`` orientations of a small graph.

An orientation is encoded as an integer whose bit ``i`` is set when edge
``i`` runs from its first endpoint ``u`` to its second endpoint ``v``.

Two backends compute identical results:

* ``numba``: ``@njit`` loops (union-find, per-orientation BFS);
* ``numpy``: vectorized over all codes, with scipy's connected components
  standing in for union-find.

The numba backend is used when numba imports cleanly, unless the
environment variable ``KASTELEYN_ACTION_NO_NUMBA`` is set to a non-empty
value other than ``0``.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("KASTELEYN_ACTION_NO_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _resolve(backend: str | None) -> str:
    backend = backend or DEFAULT_BACKEND
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# -- closure under reversal moves --------------------------------------------

def _closure_labels_numpy(n_edges, masks, bits):
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = 1 << n_edges
    codes = np.arange(n, dtype=np.int64)
    src, dst = [], []
    for m, b in zip(masks, bits):
        hit = codes[(codes & m) == b]
        src.append(hit)
        dst.append(hit ^ m)
    if src:
        src = np.concatenate(src)
        dst = np.concatenate(dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(adj, directed=True, connection="weak")
    low = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(low, comp, codes)
    return low[comp]


if HAVE_NUMBA:
    @njit(cache=True)
    def _find(parent, x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    @njit(cache=True)
    def _closure_labels_jit(n_edges, masks, bits):
        n = 1 << n_edges
        parent = np.arange(n)
        for o in range(n):
            for g in range(masks.shape[0]):
                if (o & masks[g]) == bits[g]:
                    a = _find(parent, o)
                    b = _find(parent, o ^ masks[g])
                    if a < b:
                        parent[b] = a
                    elif b < a:
                        parent[a] = b
        labels = np.empty(n, dtype=np.int64)
        for o in range(n):
            labels[o] = _find(parent, o)
        return labels

    @njit(cache=True)
    def _reach_all_jit(n_vertices, n_edges, u, v, root):
        n = 1 << n_edges
        full = (1 << n_vertices) - 1
        out = np.zeros(n, dtype=np.bool_)
        for o in range(n):
            reach = 1 << root
            changed = True
            while changed:
                changed = False
                for i in range(n_edges):
                    if (o >> i) & 1:
                        t = u[i]
                        h = v[i]
                    else:
                        t = v[i]
                        h = u[i]
                    if (reach >> t) & 1 and not (reach >> h) & 1:
                        reach |= 1 << h
                        changed = True
            out[o] = reach == full
        return out


def closure_labels(n_edges: int, masks, bits, backend: str | None = None) -> np.ndarray:
    """Label every orientation code by the smallest code in its class.

    Classes are the connected components of the move graph in which code
    ``o`` is joined to ``o ^ masks[g]`` whenever ``o & masks[g] == bits[g]``.
    """
    masks = np.asarray(masks, dtype=np.int64)
    bits = np.asarray(bits, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _closure_labels_jit(n_edges, masks, bits)
    return _closure_labels_numpy(n_edges, masks, bits)


def _reach_all_numpy(n_vertices, n_edges, u, v, root):
    codes = np.arange(1 << n_edges, dtype=np.int64)
    reach = np.full(codes.shape, 1 << root, dtype=np.int64)
    fwd = [(codes >> i) & 1 for i in range(n_edges)]
    for _ in range(max(n_vertices - 1, 0)):
        for i in range(n_edges):
            t = np.where(fwd[i] == 1, u[i], v[i])
            h = np.where(fwd[i] == 1, v[i], u[i])
            reach |= ((reach >> t) & 1) << h
    return reach == (1 << n_vertices) - 1


def reachable_all(n_vertices: int, n_edges: int, u, v, root: int,
                  backend: str | None = None) -> np.ndarray:
    """For every orientation code, whether all vertices are reachable from
    ``root`` along directed edges.  ``u[i], v[i]`` are vertex indices."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _reach_all_jit(n_vertices, n_edges, u, v, root)
    return _reach_all_numpy(n_vertices, n_edges, u, v, root)
