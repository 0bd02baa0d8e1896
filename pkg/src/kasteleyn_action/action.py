"""The map from matchings of G+ to its Kasteleyn cokernel and the induced
group action.

A :class:`Reference` bundles everything a reference matching determines:
its Temperley tree, the q-connected orientation of that tree, the induced
Kasteleyn orientation of G+, the Kasteleyn matrix and its cokernel.  The map
``psi`` sends a matching ``m`` to the 0/1 white divisor that marks the white
vertices where the two edges of ``ref ^ m`` disagree in sign, and then to its
class in the cokernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import Cokernel, CokernelClass, Matrix
from .divisors import Divisor, Jacobian, JacobianElement
from .gplus import (
    GPlusGraph,
    GPlusOrientation,
    Matching,
    induced_kasteleyn_orientation,
    kasteleyn_cokernel,
    kasteleyn_matrix,
    temperley_inverse,
)
from .orientations import Orientation, SpanningTree, q_connected_orientation
from .planar import EmbeddedPlanarGraph

WhiteDivisor = list  # of ints, indexed like the white vertices


class WrongReferenceOrientation(ValueError):
    pass


class NoPreimage(LookupError):
    pass


@dataclass(frozen=True)
class AlternatingCycleSet:
    """``m1 ^ m2`` split into vertex-disjoint cycles; every cycle starts at a
    white vertex with an ``m1`` edge and alternates ``m1``/``m2`` edges."""

    cycles: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> frozenset[int]:
        return frozenset(k for c in self.cycles for k in c)

    def __len__(self) -> int:
        return len(self.cycles)


def symmetric_difference(m1: Matching, m2: Matching, h: GPlusGraph) -> AlternatingCycleSet:
    m1_at_black = {h.edges[k].black: k for k in m1.by_white}
    cycles = []
    seen: set[int] = set()
    for w in range(h.n_white):
        if w in seen or m1.by_white[w] == m2.by_white[w]:
            continue
        cycle = []
        cur = w
        while cur not in seen:
            seen.add(cur)
            a = m1.by_white[cur]
            b = m1_at_black[h.edges[m2.by_white[cur]].black]
            cycle.extend((a, m2.by_white[cur]))
            cur = h.edges[b].white
        cycles.append(tuple(cycle))
    return AlternatingCycleSet(tuple(cycles))


def psi_vector(ref: Matching, m: Matching, ko: GPlusOrientation, h: GPlusGraph) -> WhiteDivisor:
    """0 off the support of ``ref ^ m``; on it, 0 where the two incident
    edges have the same sign under ``ko`` and 1 where they differ."""
    vec = [0] * h.n_white
    for cycle in symmetric_difference(ref, m, h).cycles:
        for a, b in zip(cycle[::2], cycle[1::2]):
            # a (from ref) and b (from m) meet at the same white vertex
            if ko.positive[a] != ko.positive[b]:
                vec[h.edges[a].white] = 1
    return vec


def reversed_edges_divisor(o0: Orientation, oi: Orientation) -> WhiteDivisor:
    """Indicator of the edges of G whose direction differs between o0 and oi."""
    if len(o0.forward) != len(oi.forward):
        raise ValueError("orientations of different graphs")
    return [int(a != b) for a, b in zip(o0.forward, oi.forward)]


def phi(d: Sequence[int], o0: Orientation, g: EmbeddedPlanarGraph,
        jac: Jacobian | None = None) -> JacobianElement:
    """Put ``d(w(e))`` chips on the head of e and ``-d(w(e))`` on its tail
    (heads and tails from ``o0``) and take the Jacobian class."""
    jac = jac or Jacobian(g)
    moves = []
    for i, x in enumerate(d):
        if x:
            moves.append((o0.head(g, i), x))
            moves.append((o0.tail(g, i), -x))
    return jac(Divisor(moves))


@dataclass
class Reference:
    """Data induced by a choice of reference matching."""

    graph: GPlusGraph
    matching: Matching
    tree: SpanningTree
    orientation: Orientation
    kasteleyn: GPlusOrientation
    matrix: Matrix
    cokernel: Cokernel
    _sign: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_matching(cls, h: GPlusGraph, m: Matching) -> "Reference":
        t = temperley_inverse(m, h)
        o = q_connected_orientation(h.source, t)
        ko = induced_kasteleyn_orientation(o, h)
        K = kasteleyn_matrix(ko, h, check=False)
        return cls(h, m, t, o, ko, K, kasteleyn_cokernel(K))

    def __post_init__(self):
        self._sign = np.array(self.kasteleyn.positive, dtype=bool)

    def psi(self, m: Matching) -> tuple[WhiteDivisor, CokernelClass]:
        vec = psi_vector(self.matching, m, self.kasteleyn, self.graph)
        return vec, self.cokernel.canonical(vec)

    def psi_vectors(self, matchings: Sequence[Matching]) -> np.ndarray:
        """The psi divisors of many matchings at once, one row per matching.

        A white vertex lies on ``ref ^ m`` exactly when the two matchings use
        different edges there, and those two edges are the ones compared.
        """
        if not matchings:
            return np.zeros((0, self.graph.n_white), dtype=np.int64)
        ref = np.array(self.matching.by_white)
        ms = np.array([m.by_white for m in matchings])
        return ((ms != ref) & (self._sign[ms] != self._sign[ref])).astype(np.int64)

    def class_codes(self, vectors: np.ndarray) -> np.ndarray:
        """Mixed-radix index (see :meth:`Cokernel.index`) of each row's class."""
        coords = self.cokernel.torsion_coordinates(vectors)
        codes = np.zeros(len(vectors), dtype=np.int64)
        for j, d in enumerate(self.cokernel.moduli):
            codes = codes * d + (coords[:, j] % d).astype(np.int64)
        return codes


def psi(ref: Matching, m: Matching, ko: GPlusOrientation, h: GPlusGraph,
        cokernel: Cokernel | None = None) -> tuple[WhiteDivisor, CokernelClass]:
    """The divisor and class of ``m`` relative to ``ref``; ``ko`` must be the
    Kasteleyn orientation induced from the Temperley tree of ``ref``."""
    expected = induced_kasteleyn_orientation(
        q_connected_orientation(h.source, temperley_inverse(ref, h)), h)
    if ko != expected:
        raise WrongReferenceOrientation("orientation is not induced from the reference tree")
    cokernel = cokernel or kasteleyn_cokernel(kasteleyn_matrix(ko, h, check=False))
    vec = psi_vector(ref, m, ko, h)
    return vec, cokernel.canonical(vec)


class ActionTable:
    """``k . m`` for every class ``k`` and matching ``m``, by enumeration.

    ``table[k, j]`` is the index of ``k . matchings[j]`` where ``k`` is a
    class index in :meth:`Cokernel.elements` order.
    """

    def __init__(self, ref: Reference, matchings: Sequence[Matching]):
        self.reference = ref
        self.matchings = list(matchings)
        self.index = {m: j for j, m in enumerate(self.matchings)}
        cok = ref.cokernel
        self.moduli = cok.moduli
        self.codes = ref.class_codes(ref.psi_vectors(self.matchings))
        n = cok.order if cok.is_finite else 0
        inverse = np.full(n, -1, dtype=np.int64)
        inverse[self.codes] = np.arange(len(self.matchings))
        self.inverse = inverse
        self.table = np.full((n, len(self.matchings)), -1, dtype=np.int64)
        for k in range(n):
            self.table[k] = inverse[add_codes(np.full(len(self.codes), k), self.codes, self.moduli)]

    @property
    def order(self) -> int:
        return len(self.inverse)

    def class_of(self, m: Matching) -> CokernelClass:
        return decode(int(self.codes[self.index[m]]), self.moduli)

    def act(self, k: CokernelClass, m: Matching) -> Matching:
        j = self.table[self.reference.cokernel.index(k), self.index[m]]
        if j < 0:
            raise NoPreimage(f"no matching has class {k + self.class_of(m)}")
        return self.matchings[j]


def group_act(k: CokernelClass, m: Matching, table: ActionTable) -> Matching:
    return table.act(k, m)


def decode(code: int, moduli: Sequence[int]) -> CokernelClass:
    res = []
    for d in reversed(moduli):
        res.append(code % d)
        code //= d
    return CokernelClass(tuple(reversed(res)), tuple(moduli))


def _digits(codes: np.ndarray, moduli: Sequence[int]) -> list[np.ndarray]:
    out = []
    for d in reversed(moduli):
        out.append(codes % d)
        codes = codes // d
    return out[::-1]


def add_codes(a: np.ndarray, b: np.ndarray, moduli: Sequence[int], sign: int = 1) -> np.ndarray:
    """Elementwise ``a + sign*b`` on mixed-radix class codes."""
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for x, y, d in zip(_digits(np.asarray(a), moduli), _digits(np.asarray(b), moduli), moduli):
        out = out * d + (x + sign * y) % d
    return out
