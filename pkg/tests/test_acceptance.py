"""Acceptance criteria 1-8, each reported as one pass/fail line.

Run with pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kasteleyn_action.algebra import determinant
from kasteleyn_action.fuzz import random_graphs
from kasteleyn_action.gplus import induced_kasteleyn_orientation, kasteleyn_cokernel, kasteleyn_matrix
from kasteleyn_action.orientations import EXHAUSTION_BOUND
from kasteleyn_action.verify import (
    GraphData,
    check_action_axioms,
    check_lemma_edge_reversal,
    check_minimal_representatives,
    check_orientation_classes,
    check_psi_bijection,
    verify_commutative_diagram,
    verify_commutative_diagram_up_to_inversion,
    verify_reference_independence,
)

from conftest import ALL, builtin

SEED = 2024
COUNT = 500
MAX_EDGES = 10
FIXED = ["k3", "c4", "theta"]

RESULTS: dict[str, tuple[bool, str]] = {}


def record(key: str, passed: bool, detail: str) -> None:
    RESULTS[key] = (passed, detail)


@lru_cache(maxsize=None)
def graphs():
    return tuple([builtin(n) for n in FIXED] + list(random_graphs(SEED, COUNT, MAX_EDGES)))


@lru_cache(maxsize=None)
def data():
    return tuple(GraphData(g) for g in graphs())


def _failures(check_fn, **kwargs):
    bad = []
    for d in data():
        c = check_fn(d, **kwargs)
        if not c.passed:
            bad.append((d.g.name, c.failures[:1]))
    return bad


def test_criterion_1_kasteleyn_count():
    start = time.perf_counter()
    bad = []
    for d in data():
        ko = induced_kasteleyn_orientation(d.tree_orientations[0], d.h)
        det = abs(determinant(kasteleyn_matrix(ko, d.h)))
        if not det == len(d.matchings) == len(d.trees):
            bad.append((d.g.name, det, len(d.matchings), len(d.trees)))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    record("1", ok, f"|det K| = |M(G+)| = |T(G)| on {len(data())} graphs in {elapsed:.2f}s"
                    + (f"; mismatches {bad[:3]}" if bad else ""))
    assert not bad
    assert elapsed < 10


def test_criterion_2_cokernel_isomorphism():
    bad = []
    for d in data():
        ko = induced_kasteleyn_orientation(d.tree_orientations[0], d.h)
        k = kasteleyn_cokernel(kasteleyn_matrix(ko, d.h)).invariant_factors
        if k != d.jac.invariant_factors:
            bad.append((d.g.name, k, d.jac.invariant_factors))
    record("2", not bad, f"invariant factors of K(G+) = Jac(G) on {len(data())} graphs"
                         + (f"; mismatches {bad[:3]}" if bad else ""))
    assert not bad


@pytest.mark.parametrize("name", ALL)
def test_criterion_3_unique_q_connected(name):
    g = builtin(name)
    assert g.n_edges <= EXHAUSTION_BOUND
    d = GraphData(g)
    start = time.perf_counter()
    literal = check_orientation_classes(d)
    elapsed = time.perf_counter() - start
    minimal = check_minimal_representatives(d)
    _merge("3", literal.passed and elapsed < 5,
           f"{name} {literal.counts['classes']}/{literal.counts['trees']}/{literal.counts['q_connected']}",
           "classes/trees/q-connected: ")
    _merge("3 (no clockwise cycle)", minimal.passed, f"{name} {minimal.counts['classes']}",
           "classes with one minimal q-connected member: ")
    assert elapsed < 5
    assert literal.passed, (
        f"{name}: classes hold {literal.counts['q_connected']} q-connected orientations "
        f"for {literal.counts['classes']} classes; first offenders {literal.failures[:2]}")


@pytest.mark.parametrize("name", ALL)
def test_criterion_3_minimal_form(name):
    c = check_minimal_representatives(GraphData(builtin(name)))
    assert c.passed, c.failures


def _merge(key, passed, item, heading):
    ok, detail = RESULTS.get(key, (True, heading))
    sep = "" if detail == heading else ", "
    RESULTS[key] = (ok and passed, detail + sep + item)


def test_criterion_4_psi_bijection():
    bad = _failures(check_psi_bijection)
    refs = sum(len(d.matchings) for d in data())
    record("4", not bad, f"Psi_0 bijective for all {refs} reference choices on {len(data())} graphs"
                         + (f"; failures {bad[:2]}" if bad else ""))
    assert not bad


def test_criterion_5_lemma_exact_vectors():
    bad = _failures(check_lemma_edge_reversal)
    pairs = sum(len(d.matchings) ** 2 for d in data())
    record("5", not bad, f"exact vector equality on {pairs} (reference, matching) pairs"
                         + (f"; failures {bad[:2]}" if bad else ""))
    assert not bad


def test_criterion_6_commutative_diagram():
    bad = _failures(verify_commutative_diagram)
    inverted = _failures(verify_commutative_diagram_up_to_inversion)
    trees = sum(len(d.trees) for d in data())
    record("6", not bad, f"phi o Psi_0 o Temperley = Bernardi literally on "
                         f"{len(data()) - len(bad)}/{len(data())} graphs; "
                         f"= -Bernardi on {len(data()) - len(inverted)}/{len(data())} ({trees} trees)")
    assert not inverted
    assert not bad, f"{len(bad)} graphs fail, e.g. {bad[:2]}"


def test_criterion_7_action():
    axioms = _failures(check_action_axioms, exhaustive=True)
    indep = _failures(verify_reference_independence)
    record("7", not axioms and not indep,
           f"axioms and simple transitivity exhaustive, reference independence with "
           f"{len(indep)} counterexample graphs on {len(data())} graphs")
    assert not axioms
    assert not indep


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "kasteleyn_action.cli", *args],
                          capture_output=True, check=False).stdout


def test_criterion_8_determinism():
    runs = [
        ("verify", "--input", "k3", "--format", "structured"),
        ("verify", "--input", "theta"),
        ("fuzz", "--seed", "7", "--count", "25", "--max-edges", "10", "--format", "structured"),
        ("fuzz", "--seed", "7", "--count", "25", "--max-edges", "10"),
    ]
    same = [_cli(*r) == _cli(*r) for r in runs]
    ok = all(same) and all(_cli(*r) for r in runs)
    record("8", ok, f"{sum(same)}/{len(runs)} report pairs byte-identical")
    assert ok


def summary_lines() -> list[str]:
    keys = ["1", "2", "3", "3 (no clockwise cycle)", "4", "5", "6", "7", "8"]
    out = []
    for k in keys:
        if k in RESULTS:
            ok, detail = RESULTS[k]
            out.append(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    return out


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
