"""Compare the numba and numpy backends of the orientation-closure kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [graph ...]

Timings exclude the first (compiling) numba call.
"""

import argparse
import time
from importlib import resources

import numpy as np

from kasteleyn_action import kernels, parse_graph
from kasteleyn_action.orientations import move_generators

DEFAULT = ["k4", "w5", "grid3x3", "cube", "w7"]


def load(name):
    return parse_graph((resources.files("kasteleyn_action") / "graphs" / f"{name}.json").read_text())


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("graphs", nargs="*", default=DEFAULT)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    print(f"{'graph':10} {'E':>3} {'gens':>5} {'kernel':8} " + " ".join(f"{b:>10}" for b in backends))
    for name in args.graphs:
        g = load(name)
        masks, bits = move_generators(g)
        u = [g.vertex_index[e.u] for e in g.edges]
        v = [g.vertex_index[e.v] for e in g.edges]
        root = g.vertex_index[g.root]
        jobs = {
            "closure": lambda b: kernels.closure_labels(g.n_edges, masks, bits, backend=b),
            "reach": lambda b: kernels.reachable_all(g.n_vertices, g.n_edges, u, v, root, backend=b),
        }
        for kernel, fn in jobs.items():
            row, outs = [], []
            for b in backends:
                fn(b)  # warm up (jit compile)
                t, out = best_of(lambda: fn(b), args.repeat)
                row.append(f"{t * 1e3:9.2f}ms")
                outs.append(out)
            assert all(np.array_equal(o, outs[0]) for o in outs)
            print(f"{name:10} {g.n_edges:3d} {len(masks):5d} {kernel:8} " + " ".join(row))


if __name__ == "__main__":
    main()
