import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings

from kasteleyn_action import kernels
from kasteleyn_action.orientations import move_generators, orientation_classes

from conftest import ALL, builtin, fuzzed

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


def _inputs(g):
    masks, bits = move_generators(g)
    u = [g.vertex_index[e.u] for e in g.edges]
    v = [g.vertex_index[e.v] for e in g.edges]
    return masks, bits, u, v, g.vertex_index[g.root]


@pytest.mark.parametrize("name", ALL)
def test_backends_agree(name):
    g = builtin(name)
    masks, bits, u, v, root = _inputs(g)
    labels = [kernels.closure_labels(g.n_edges, masks, bits, backend=b) for b in BACKENDS]
    reach = [kernels.reachable_all(g.n_vertices, g.n_edges, u, v, root, backend=b) for b in BACKENDS]
    for x in labels[1:]:
        np.testing.assert_array_equal(x, labels[0])
    for x in reach[1:]:
        np.testing.assert_array_equal(x, reach[0])


@settings(max_examples=25, deadline=None)
@given(fuzzed(9))
def test_backends_agree_on_fuzzed(g):
    results = [orientation_classes(g, backend=b) for b in BACKENDS]
    for r in results[1:]:
        assert r == results[0]


def test_labels_are_class_minima(k3):
    masks, bits, *_ = _inputs(k3)
    for b in BACKENDS:
        labels = kernels.closure_labels(k3.n_edges, masks, bits, backend=b)
        assert all(labels[c] <= c for c in range(8))
        assert all(labels[labels[c]] == labels[c] for c in range(8))


def test_unknown_backend(k3):
    with pytest.raises(ValueError):
        kernels.closure_labels(3, [], [], backend="fortran")


def test_env_flag_disables_numba():
    env = dict(os.environ, KASTELEYN_ACTION_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c",
                          "from kasteleyn_action import kernels; print(kernels.DEFAULT_BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
