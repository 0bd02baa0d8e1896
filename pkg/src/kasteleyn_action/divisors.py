"""Divisors, the graph Laplacian, chip-firing and the Jacobian."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .algebra import Cokernel, CokernelClass, Matrix, determinant
from .planar import EmbeddedPlanarGraph


class UnknownVertex(KeyError):
    pass


class Divisor(Mapping[str, int]):
    """An integer combination of vertices; zero coefficients are not stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, int] = {}
        for v, a in items:
            acc[v] = acc.get(v, 0) + int(a)
        self._coeffs = {v: a for v, a in acc.items() if a}

    def __getitem__(self, v: str) -> int:
        return self._coeffs.get(v, 0)

    def __iter__(self):
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __contains__(self, v: object) -> bool:
        return v in self._coeffs

    @property
    def degree(self) -> int:
        return sum(self._coeffs.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self.items()) + list(other.items()))

    def __neg__(self) -> "Divisor":
        return Divisor({v: -a for v, a in self.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Divisor):
            return self._coeffs == other._coeffs
        if isinstance(other, Mapping):
            return self == Divisor(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def vector(self, g: EmbeddedPlanarGraph) -> list[int]:
        return [self[v] for v in g.vertices]

    @classmethod
    def from_vector(cls, g: EmbeddedPlanarGraph, vec: Iterable[int]) -> "Divisor":
        return cls(zip(g.vertices, vec))

    def to_json(self, g: EmbeddedPlanarGraph | None = None) -> dict[str, int]:
        order = g.vertices if g is not None else sorted(self._coeffs)
        return {v: self._coeffs[v] for v in order if v in self._coeffs}

    def __repr__(self) -> str:
        return f"Divisor({dict(sorted(self._coeffs.items()))})"


def laplacian(g: EmbeddedPlanarGraph) -> Matrix:
    n = g.n_vertices
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        i, j = g.vertex_index[e.u], g.vertex_index[e.v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return lap


def reduced_laplacian(g: EmbeddedPlanarGraph) -> Matrix:
    """Laplacian with the row and column of the root deleted."""
    q = g.vertex_index[g.root]
    lap = laplacian(g)
    return [[x for j, x in enumerate(row) if j != q] for i, row in enumerate(lap) if i != q]


def chip_fire(g: EmbeddedPlanarGraph, d: Divisor, v: str) -> Divisor:
    """Fire ``v`` once: it loses one chip per incident edge, each neighbour
    gains one chip per shared edge."""
    if v not in g.vertex_index:
        raise UnknownVertex(v)
    moves = [(v, -g.degree(v))]
    for e in g.incident_edges(v):
        edge = g.edges[e]
        moves.append((edge.v if edge.u == v else edge.u, 1))
    return d + Divisor(moves)


def spanning_tree_count(g: EmbeddedPlanarGraph) -> int:
    return determinant(reduced_laplacian(g))


@dataclass(frozen=True)
class JacobianElement:
    cls: CokernelClass
    witness: Divisor

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JacobianElement):
            return NotImplemented
        return self.cls == other.cls

    def __hash__(self) -> int:
        return hash(self.cls)

    @property
    def is_zero(self) -> bool:
        return self.cls.is_zero


class Jacobian:
    """``Div^0(G) / Prin(G)``, realized on the non-root coordinates.

    Restricting a degree-0 divisor to ``V - {q}`` is an isomorphism onto
    ``Z^(n-1)`` that carries ``Prin(G)`` onto the row lattice of the reduced
    Laplacian, so classes are canonical residues under that lattice.
    """

    def __init__(self, g: EmbeddedPlanarGraph):
        self.graph = g
        self._others = [v for v in g.vertices if v != g.root]
        if self._others:
            self.cokernel = Cokernel(reduced_laplacian(g))
        else:
            self.cokernel = Cokernel([], ncols=0)

    @property
    def invariant_factors(self) -> list[int]:
        return self.cokernel.invariant_factors

    @property
    def order(self) -> int:
        return self.cokernel.order

    def __call__(self, d: Divisor) -> JacobianElement:
        if d.degree != 0:
            raise ValueError(f"Jacobian elements need degree 0, got degree {d.degree}")
        unknown = set(d) - set(self.graph.vertex_index)
        if unknown:
            raise UnknownVertex(sorted(unknown)[0])
        return JacobianElement(self.cokernel.canonical([d[v] for v in self._others]), d)

    def shifted(self, d: Divisor, reference: Divisor) -> JacobianElement:
        """Class of ``d - reference`` for divisors of equal degree."""
        if d.degree != reference.degree:
            raise ValueError("divisor and reference have different degrees")
        return self(d - reference)

    def zero(self) -> JacobianElement:
        return JacobianElement(self.cokernel.zero(), Divisor())


def jacobian_structure(g: EmbeddedPlanarGraph) -> list[int]:
    return Jacobian(g).invariant_factors


def linearly_equivalent(g: EmbeddedPlanarGraph, d1: Divisor, d2: Divisor) -> bool:
    if d1.degree != d2.degree:
        return False
    jac = Jacobian(g)
    return jac(d1 - d2).is_zero
