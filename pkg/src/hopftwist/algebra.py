"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .linalg import (ONE, ZERO, Matrix, Q, SparseVec, axpy, dense, solve_sparse,
                     sparse, vcanon)
from .report import Report


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Algebra:
    """Algebra with basis b_0..b_{dim-1}; ``table[i][j]`` is b_i*b_j as a sparse vector."""

    dim: int
    table: tuple
    unit: tuple  # dense

    @classmethod
    def from_triples(cls, dim: int, triples: Iterable, unit: Sequence) -> "Algebra":
        """``triples`` are (i, j, k, c) meaning b_i*b_j has coefficient c on b_k."""
        rows = [[dict() for _ in range(dim)] for _ in range(dim)]
        for i, j, k, c in triples:
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise AlgebraError(f"basis index {idx} out of range for dim {dim}")
            c = Q(c)
            cell = rows[i][j]
            v = cell.get(k, ZERO) + c
            if v:
                cell[k] = v
            else:
                cell.pop(k, None)
        if len(unit) != dim:
            raise AlgebraError("unit vector has wrong length")
        return cls(dim, tuple(tuple(r) for r in rows), tuple(Q(u) for u in unit))

    @classmethod
    def from_dense(cls, c, unit) -> "Algebra":
        dim = len(c)
        trip = [(i, j, k, c[i][j][k]) for i in range(dim) for j in range(dim)
                for k in range(dim) if c[i][j][k]]
        return cls.from_triples(dim, trip, unit)

    @classmethod
    def ground_field(cls) -> "Algebra":
        return cls.from_triples(1, [(0, 0, 0, 1)], [1])

    def structure_constants(self) -> list:
        """Dense c[i][j][k]."""
        return [[dense(self.table[i][j], self.dim) for j in range(self.dim)] for i in range(self.dim)]

    def triples(self) -> list:
        return [(i, j, k, c) for i in range(self.dim) for j in range(self.dim)
                for k, c in sorted(self.table[i][j].items())]

    @cached_property
    def unit_vec(self) -> SparseVec:
        return {i: c for i, c in enumerate(self.unit) if c}

    def basis(self, i: int) -> SparseVec:
        return {i: ONE}

    def multiply(self, x: Mapping, y: Mapping) -> SparseVec:
        out: dict = {}
        t = self.table
        for i, a in x.items():
            ti = t[i]
            for j, b in y.items():
                axpy(out, ti[j], a * b)
        return out

    def mul_dense(self, x: Sequence, y: Sequence) -> list:
        if len(x) != self.dim or len(y) != self.dim:
            raise AlgebraError("dimension mismatch")
        return dense(self.multiply(sparse(x), sparse(y)), self.dim)

    def product(self, *xs: Mapping) -> SparseVec:
        out = self.unit_vec
        for x in xs:
            out = self.multiply(out, x)
        return out

    def left_mult_matrix(self, x: Mapping) -> Matrix:
        return Matrix.from_columns(self.dim, [self.multiply(x, {j: ONE}) for j in range(self.dim)])

    def opposite(self) -> "Algebra":
        op = self.__dict__.get("_opposite")
        if op is None:
            table = tuple(tuple(self.table[j][i] for j in range(self.dim)) for i in range(self.dim))
            op = Algebra(self.dim, table, self.unit)
            object.__setattr__(op, "_opposite", self)
            object.__setattr__(self, "_opposite", op)
        return op

    def same_as(self, other: "Algebra") -> bool:
        return (self.dim == other.dim and self.unit == other.unit
                and all(vcanon(self.table[i][j]) == vcanon(other.table[i][j])
                        for i in range(self.dim) for j in range(self.dim)))

    def is_commutative(self) -> bool:
        return all(vcanon(self.table[i][j]) == vcanon(self.table[j][i])
                   for i in range(self.dim) for j in range(i))

    def check(self) -> Report:
        """Exhaustive associativity and unitality check."""
        rep = Report("algebra")
        with rep.timed("associativity") as h:
            for i in range(self.dim):
                for j in range(self.dim):
                    ij = self.table[i][j]
                    for k in range(self.dim):
                        lhs = self.multiply(ij, {k: ONE})
                        rhs = self.multiply({i: ONE}, self.table[j][k])
                        if vcanon(lhs) != vcanon(rhs):
                            h[0], h[1] = False, {"basis": [i, j, k]}
                            break
                    if not h[0]:
                        break
                if not h[0]:
                    break
        with rep.timed("unit") as h:
            u = self.unit_vec
            for i in range(self.dim):
                e = {i: ONE}
                if vcanon(self.multiply(u, e)) != vcanon(e) or vcanon(self.multiply(e, u)) != vcanon(e):
                    h[0], h[1] = False, {"basis": i}
                    break
        return rep

    def invert_element(self, v: Mapping) -> Optional[SparseVec]:
        """Two-sided inverse of v, or None."""
        cols = [self.multiply(v, {j: ONE}) for j in range(self.dim)]
        res = solve_sparse(cols, self.unit_vec, self.dim)
        if res is None:
            return None
        w = res[0]
        if vcanon(self.multiply(w, v)) != vcanon(self.unit_vec):
            return None
        return w


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: Matrix  # target.dim x source.dim

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise AlgebraError("algebra map matrix has wrong shape")

    def __call__(self, x: Mapping) -> SparseVec:
        return self.matrix.apply(x)

    def image(self, i: int) -> SparseVec:
        return self.matrix.column(i)

    def check(self) -> Report:
        return check_algebra_map(self)


def check_algebra_map(f: AlgebraMap) -> Report:
    rep = Report("algebra map")
    A, B = f.source, f.target
    with rep.timed("unital") as h:
        if vcanon(f(A.unit_vec)) != vcanon(B.unit_vec):
            h[0], h[1] = False, {"image_of_unit": dense(f(A.unit_vec), B.dim)}
    with rep.timed("multiplicative") as h:
        imgs = [f.image(i) for i in range(A.dim)]
        for i in range(A.dim):
            for j in range(A.dim):
                if vcanon(f(A.table[i][j])) != vcanon(B.multiply(imgs[i], imgs[j])):
                    h[0], h[1] = False, {"pair": [i, j]}
                    break
            if not h[0]:
                break
    return rep


def multiply(A: Algebra, x: Sequence, y: Sequence) -> list:
    return A.mul_dense(x, y)


def opposite(A: Algebra) -> Algebra:
    return A.opposite()


def invert_element(A: Algebra, v: Sequence) -> Optional[list]:
    if len(v) != A.dim:
        raise AlgebraError("dimension mismatch")
    w = A.invert_element(sparse(v))
    return None if w is None else dense(w, A.dim)


# -- a few standard presentations -------------------------------------------


def matrix_algebra(n: int) -> Algebra:
    """M_n(Q) with matrix-unit basis E_ij at index i*n+j."""
    trip = [(i * n + j, j * n + l, i * n + l, 1) for i in range(n) for j in range(n) for l in range(n)]
    unit = [1 if (k // n == k % n) else 0 for k in range(n * n)]
    return Algebra.from_triples(n * n, trip, unit)


def group_algebra(product: Sequence[Sequence[int]], identity: int = 0) -> Algebra:
    n = len(product)
    trip = [(i, j, product[i][j], 1) for i in range(n) for j in range(n)]
    unit = [1 if k == identity else 0 for k in range(n)]
    return Algebra.from_triples(n, trip, unit)


def tensor_algebra(A: Algebra, B: Algebra) -> Algebra:
    """A (x) B with basis index i*B.dim + j."""
    m = B.dim
    trip = []
    for i in range(A.dim):
        for j in range(m):
            for k in range(A.dim):
                for l in range(m):
                    for p, a in A.table[i][k].items():
                        for q, b in B.table[j][l].items():
                            trip.append((i * m + j, k * m + l, p * m + q, a * b))
    unit = [A.unit[i] * B.unit[j] for i in range(A.dim) for j in range(m)]
    return Algebra.from_triples(A.dim * m, trip, unit)
