"""Exact integer linear algebra.

Matrices are lists of lists of Python ints (or anything ``IntegerMatrix``
accepts).  Nothing here touches machine-word arithmetic: Smith normal form
intermediates can grow quickly even on small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

Matrix = list[list[int]]


class DimensionMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


class InfiniteCokernelCoordinate(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = [[int(x) for x in row] for row in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    cols = len(b[0]) if b else 0
    bt = [[b[k][j] for k in range(len(b))] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence[int], m: Matrix) -> list[int]:
    if len(v) != len(m):
        raise DimensionMismatch(f"vector of length {len(v)} against {len(m)} rows")
    cols = len(m[0]) if m else 0
    return [sum(v[k] * m[k][j] for k in range(len(m))) for j in range(cols)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    a = as_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise NotSquare(f"{n}x{len(a[0])} matrix has no determinant")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D diagonal.

    The diagonal of D holds the invariant factors d1 | d2 | ... (all >= 0,
    zeros last).
    """

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def _pivot(a: Matrix, t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            x = abs(a[i][j])
            if x and (best is None or x < best[0]):
                best = (x, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting is deterministic: the nonzero entry of least absolute value,
    ties broken by row-major position, so identical input always yields
    identical ``U``, ``D`` and ``V``.
    """
    a = as_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            piv = _pivot(a, t)
            if piv is None:
                break
            i, j = piv
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(U, a, V)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nontrivial invariant factors (entries > 1, plus zeros for free rank)."""
    diag = smith_normal_form(m).diagonal
    return [d for d in diag if d != 1]


@dataclass(frozen=True)
class CokernelClass:
    """An element of ``Z/d1 x ... x Z/dk`` in canonical coordinates."""

    residues: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != len(self.moduli):
            raise DimensionMismatch("residues and moduli differ in length")
        if any(not 0 <= r < d for r, d in zip(self.residues, self.moduli)):
            raise ValueError(f"residues {self.residues} not reduced mod {self.moduli}")

    def _check(self, other: "CokernelClass") -> None:
        if self.moduli != other.moduli:
            raise DimensionMismatch("classes from different groups")

    def __add__(self, other: "CokernelClass") -> "CokernelClass":
        self._check(other)
        return CokernelClass(tuple((a + b) % d for a, b, d in
                                   zip(self.residues, other.residues, self.moduli)), self.moduli)

    def __neg__(self) -> "CokernelClass":
        return CokernelClass(tuple(-a % d for a, d in zip(self.residues, self.moduli)), self.moduli)

    def __sub__(self, other: "CokernelClass") -> "CokernelClass":
        return self + (-other)

    def __mul__(self, k: int) -> "CokernelClass":
        return CokernelClass(tuple(a * k % d for a, d in zip(self.residues, self.moduli)), self.moduli)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.residues)

    def order(self) -> int:
        from math import gcd, lcm
        out = 1
        for a, d in zip(self.residues, self.moduli):
            out = lcm(out, d // gcd(a, d))
        return out

    def __str__(self) -> str:
        return "(" + ", ".join(f"{a} mod {d}" for a, d in zip(self.residues, self.moduli)) + ")"


class Cokernel:
    """The quotient ``Z^n / rowspace(L)`` for a relation matrix ``L``.

    Coordinates come from the Smith decomposition ``U L V = D``: a vector
    ``v`` lies in the row lattice iff ``(v V)_i`` is divisible by ``d_i`` for
    every i (and vanishes where ``d_i = 0``).  Coordinates with ``d_i = 1``
    are dropped; those with ``d_i = 0`` (free part) are only allowed to be
    zero.
    """

    def __init__(self, relations: Sequence[Sequence[int]], ncols: int | None = None):
        rel = as_matrix(relations)
        if ncols is None:
            if not rel:
                raise DimensionMismatch("empty relation matrix needs ncols")
            ncols = len(rel[0])
        if rel and len(rel[0]) != ncols:
            raise DimensionMismatch(f"relations have {len(rel[0])} columns, expected {ncols}")
        self.relations = rel
        self.ncols = ncols
        if rel:
            self.snf = smith_normal_form(rel)
            diag = self.snf.diagonal
            V = self.snf.V
        else:
            self.snf = None
            diag = []
            V = identity(ncols)
        self._V = V
        full = diag + [0] * (ncols - len(diag))
        self._torsion = [i for i, d in enumerate(full) if d > 1]
        self._free = [i for i, d in enumerate(full) if d == 0]
        self.moduli = tuple(full[i] for i in self._torsion)

    @property
    def invariant_factors(self) -> list[int]:
        return list(self.moduli)

    @property
    def is_finite(self) -> bool:
        return not self._free

    @property
    def order(self) -> int:
        if self._free:
            raise InfiniteCokernelCoordinate("cokernel is infinite")
        out = 1
        for d in self.moduli:
            out *= d
        return out

    def coordinates(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)}, expected {self.ncols}")
        return vecmat([int(x) for x in v], self._V)

    def contains(self, v: Sequence[int]) -> bool:
        w = self.coordinates(v)
        full = self.snf.diagonal if self.snf else []
        full = full + [0] * (self.ncols - len(full))
        return all((x == 0) if d == 0 else (x % d == 0) for x, d in zip(w, full))

    def canonical(self, v: Sequence[int]) -> CokernelClass:
        w = self.coordinates(v)
        if any(w[i] for i in self._free):
            raise InfiniteCokernelCoordinate("vector has a nonzero free coordinate")
        return CokernelClass(tuple(w[i] % d for i, d in zip(self._torsion, self.moduli)), self.moduli)

    def torsion_coordinates(self, vectors) -> np.ndarray:
        """Torsion coordinates (unreduced) of many vectors, one per row."""
        vectors = np.asarray(vectors, dtype=object).reshape(-1, self.ncols)
        full = vectors @ np.array(self._V, dtype=object).reshape(self.ncols, self.ncols)
        if self._free and full[:, self._free].any():
            raise InfiniteCokernelCoordinate("vector has a nonzero free coordinate")
        return full[:, self._torsion]

    def zero(self) -> CokernelClass:
        return CokernelClass((0,) * len(self.moduli), self.moduli)

    def elements(self) -> Iterator[CokernelClass]:
        """All classes, in lexicographic order of residues."""
        for res in product(*(range(d) for d in self.moduli)):
            yield CokernelClass(tuple(res), self.moduli)

    def generators(self) -> list[CokernelClass]:
        out = []
        for k in range(len(self.moduli)):
            out.append(CokernelClass(tuple(int(i == k) for i in range(len(self.moduli))), self.moduli))
        return out

    def index(self, c: CokernelClass) -> int:
        """Mixed-radix position of ``c`` in :meth:`elements` order."""
        out = 0
        for r, d in zip(c.residues, c.moduli):
            out = out * d + r
        return out


def lattice_membership(v: Sequence[int], lattice: Sequence[Sequence[int]]) -> bool:
    """Whether ``v`` is an integer combination of the rows of ``lattice``."""
    rows = as_matrix(lattice)
    if rows and len(v) != len(rows[0]):
        raise DimensionMismatch(f"vector of length {len(v)} against {len(rows[0])} columns")
    if not rows:
        return not any(v)
    return Cokernel(rows).contains(v)


def canonical_class(v: Sequence[int], relations: Sequence[Sequence[int]]) -> CokernelClass:
    return Cokernel(relations).canonical(v)
