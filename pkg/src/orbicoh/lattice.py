# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Exact integer linear algebra over lattices.

Matrices are :class:`sympy.Matrix` instances holding integers. Reductions run on
plain python integers so that arbitrary precision is kept throughout, and the
results are handed back as sympy matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from itertools import combinations
from math import gcd, prod
from typing import Iterable, Sequence, Union
import logging

import sympy

logger = logging.getLogger(__name__)


class ZeroVector(ValueError):
    """Raised when a nonzero vector is required."""

    pass


class RankDeficient(ValueError):
    """Raised when a set of vectors is expected to be linearly independent."""

    pass


class DimensionTooSmall(ValueError):
    """Raised when the ambient lattice has too small a rank."""

    pass


class Unbounded(Enum):
    """Sentinel for the index of a sublattice of deficient rank."""

    INFINITE = "inf"

    def __str__(self):
        return "∞"


INFINITE = Unbounded.INFINITE

Index = Union[int, Unbounded]


def to_matrix(data) -> sympy.Matrix:
    """Return `data` as an integer sympy matrix, given as a matrix or a list of rows."""
    if isinstance(data, sympy.MatrixBase):
        return sympy.Matrix(data)
    return sympy.Matrix([[int(x) for x in row] for row in data])


def from_columns(vectors: Iterable[Sequence[int]], n: int) -> sympy.Matrix:
    """Build the n-row matrix whose columns are `vectors`."""
    vectors = [tuple(int(x) for x in v) for v in vectors]
    for v in vectors:
        if len(v) != n:
            raise ValueError(f"{v} does not have {n} coordinates.")
    if not vectors:
        return sympy.zeros(n, 0)
    return sympy.Matrix(vectors).T


def _rows(matrix: sympy.Matrix) -> list[list[int]]:
    return [[int(x) for x in matrix.row(i)] for i in range(matrix.rows)]


def _identity(size: int) -> list[list[int]]:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def _as_matrix(rows: list[list[int]], n_rows: int, n_cols: int) -> sympy.Matrix:
    if not n_rows or not n_cols:
        return sympy.zeros(n_rows, n_cols)
    return sympy.Matrix(rows)


@dataclass(frozen=True)
class SNFDecomposition:
    """A Smith normal form ``U * M * V == S`` of an integer matrix ``M``.

    :param U: unimodular matrix of row operations
    :param S: diagonal matrix with the shape of ``M``
    :param V: unimodular matrix of column operations
    :param divisors: the diagonal of ``S``, each entry dividing the next, zeros last
    """

    U: sympy.Matrix
    S: sympy.Matrix
    V: sympy.Matrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for e in self.divisors if e)


def smith_normal_form(M) -> SNFDecomposition:
    """Diagonalize `M` with unimodular row and column operations.

    The entry of least absolute value in the remaining block is moved to the pivot
    and used to reduce its row and column. Whatever remainder is left becomes the
    next pivot. Once row and column are clear, an entry not divisible by the pivot
    has its row added to the pivot row and the reduction starts over.
    """
    M = to_matrix(M)
    n_rows, n_cols = M.shape
    a = _rows(M)
    u = _identity(n_rows)
    v = _identity(n_cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, factor):
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
        u[target] = [x + factor * y for x, y in zip(u[target], u[source])]

    def add_col(target, source, factor):
        for row in a:
            row[target] += factor * row[source]
        for row in v:
            row[target] += factor * row[source]

    for t in range(min(n_rows, n_cols)):
        while True:
            pivot = min(
                (
                    (abs(a[i][j]), i, j)
                    for i in range(t, n_rows)
                    for j in range(t, n_cols)
                    if a[i][j]
                ),
                default=None,
            )
            if pivot is None:
                break
            _, i, j = pivot
            swap_rows(t, i)
            swap_cols(t, j)

            clear = True
            for r in range(t + 1, n_rows):
                q = a[r][t] // a[t][t]
                if q:
                    add_row(r, t, -q)
                clear = clear and not a[r][t]
            for c in range(t + 1, n_cols):
                q = a[t][c] // a[t][t]
                if q:
                    add_col(c, t, -q)
                clear = clear and not a[t][c]
            if not clear:
                continue

            stray = next(
                (
                    r
                    for r in range(t + 1, n_rows)
                    for c in range(t + 1, n_cols)
                    if a[r][c] % a[t][t]
                ),
                None,
            )
            if stray is None:
                break
            add_row(t, stray, 1)

        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    divisors = tuple(a[t][t] for t in range(min(n_rows, n_cols)))
    return SNFDecomposition(
        U=_as_matrix(u, n_rows, n_rows),
        S=_as_matrix(a, n_rows, n_cols),
        V=_as_matrix(v, n_cols, n_cols),
        divisors=divisors,
    )


def rank(M) -> int:
    """Return the rank of `M` over the rationals."""
    return smith_normal_form(M).rank


def determinantal_divisors(M) -> tuple[int, ...]:
    """Return the gcd of all i by i minors of `M`, for i = 1 .. min(rows, cols).

    Exhaustive over minors, so only meant for small matrices.
    """
    M = to_matrix(M)
    divisors = []
    for size in range(1, min(M.shape) + 1):
        minors = (
            int(M.extract(list(rows), list(cols)).det())
            for rows in combinations(range(M.rows), size)
            for cols in combinations(range(M.cols), size)
        )
        divisors.append(reduce(gcd, minors, 0))
    return tuple(divisors)


def is_unimodular(M) -> bool:
    """Return True when `M` is square with determinant plus or minus one."""
    M = to_matrix(M)
    return M.is_square and abs(int(M.det())) == 1


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group in invariant factor form.

    :param free_rank: the rank of the free part
    :param torsion: invariant factors ``t_1 | t_2 | ...``, each at least 2
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError(f"Negative free rank {self.free_rank}.")
        if any(t < 2 for t in self.torsion):
            raise ValueError(f"Invariant factors {self.torsion} must be at least 2.")
        for smaller, larger in zip(self.torsion, self.torsion[1:]):
            if larger % smaller:
                raise ValueError(f"{smaller} does not divide {larger}.")

    @classmethod
    def from_cyclic_orders(
        cls, orders: Iterable[int], free_rank: int = 0
    ) -> FinAbGroup:
        """Canonicalize a sum of cyclic groups ``Z/o``, where ``Z/0`` is ``Z``."""
        orders = [abs(int(o)) for o in orders]
        group = cokernel(sympy.diag(*orders) if orders else sympy.zeros(0, 0))
        return cls(group.free_rank + free_rank, group.torsion)

    @classmethod
    def deserialize(cls, data: dict) -> FinAbGroup:
        return cls(int(data["rank"]), tuple(int(t) for t in data["factors"]))

    def serialize(self) -> dict:
        return {"rank": self.free_rank, "factors": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return not self.free_rank and not self.torsion

    @property
    def is_finite(self) -> bool:
        return not self.free_rank

    @property
    def order(self) -> Index:
        if self.free_rank:
            return INFINITE
        return prod(self.torsion)

    def p_part(self, p: int) -> tuple[int, ...]:
        """Return the orders of the cyclic p-primary summands."""
        orders = []
        for t in self.torsion:
            power = 1
            while t % p == 0:
                t //= p
                power *= p
            if power > 1:
                orders.append(power)
        return tuple(orders)

    def has_p_torsion(self, p: int) -> bool:
        return any(t % p == 0 for t in self.torsion)

    def __add__(self, other: FinAbGroup) -> FinAbGroup:
        return FinAbGroup.from_cyclic_orders(
            self.torsion + other.torsion, self.free_rank + other.free_rank
        )

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " ⊕ ".join(parts) or "0"


def cokernel(M) -> FinAbGroup:
    """Return ``Z^rows`` modulo the column span of `M`."""
    M = to_matrix(M)
    snf = smith_normal_form(M)
    return FinAbGroup(
        free_rank=M.rows - snf.rank,
        torsion=tuple(e for e in snf.divisors if e > 1),
    )


def lattice_index(M) -> Index:
    """Return the index of the column span of `M` in ``Z^rows``.

    :returns: the index, or :data:`INFINITE` when the span has deficient rank
    """
    M = to_matrix(M)
    snf = smith_normal_form(M)
    if snf.rank < M.rows:
        return INFINITE
    return prod(snf.divisors[: M.rows])


def primitivize(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Split `v` into a primitive vector with the same direction and its scale."""
    v = tuple(int(x) for x in v)
    scale = gcd(*v) if v else 0
    if not scale:
        raise ZeroVector(f"{v} has no primitive direction.")
    return tuple(x // scale for x in v), scale


def is_primitive(v: Sequence[int]) -> bool:
    return gcd(*(int(x) for x in v)) == 1 if v else False


def quotient_projection(basis, n: int | None = None) -> sympy.Matrix:
    """Return a projection of ``Z^n`` whose kernel is the saturation of `basis`.

    :param basis: an n by r matrix with independent columns
    :param n: the number of rows, needed when `basis` has no columns
    :returns: an (n - r) by n integer matrix, surjective onto ``Z^(n-r)``
    :raises RankDeficient: if the columns of `basis` are dependent
    """
    if n is not None and not isinstance(basis, sympy.MatrixBase):
        basis = from_columns(basis, n)
    basis = to_matrix(basis)
    snf = smith_normal_form(basis)
    if snf.rank < basis.cols:
        raise RankDeficient(f"Columns of {basis.tolist()} are linearly dependent.")
    projection = snf.U[snf.rank :, :]
    logger.debug(f"Projection with kernel spanned by {basis.tolist()}: {projection}")
    return projection


def wedge(u: Sequence[int], w: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of ``u ∧ w`` in the basis ``e_a ∧ e_b``, ``a < b``."""
    return tuple(
        int(u[a]) * int(w[b]) - int(u[b]) * int(w[a])
        for a, b in combinations(range(len(u)), 2)
    )


def wedge_square_quotient(
    vectors: Sequence[Sequence[int]], n: int | None = None
) -> FinAbGroup:
    """Return ``∧²Z^n`` modulo the span of all ``v ∧ e_j``.

    :param n: the rank of the ambient lattice, read off `vectors` when omitted
    :raises DimensionTooSmall: if n < 2
    """
    if n is None:
        if not vectors:
            raise ValueError("Cannot infer the dimension of an empty vector list.")
        n = len(vectors[0])
    if n < 2:
        raise DimensionTooSmall(f"∧² of a rank {n} lattice is zero.")
    basis = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    columns = [wedge(v, e) for v in vectors for e in basis]
    return cokernel(from_columns(columns, n * (n - 1) // 2))
