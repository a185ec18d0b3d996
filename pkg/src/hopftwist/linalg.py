"""Exact rational linear algebra.

Scalars are ``gmpy2.mpq`` values (always reduced, denominator > 0).  Vectors
that live in big tensor spaces are kept sparse as ``{index: mpq}`` dicts with
no explicit zeros; small maps between named spaces are dense ``Matrix``
objects.  Subspaces are stored in reduced row-echelon form, which is the
canonical form used for equality and for coset representatives.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from gmpy2 import mpq

Scalar = type(mpq(0))
SparseVec = dict  # {int: mpq}, zero entries never stored

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> Scalar:
    """Coerce ``x`` (int, str "p/q", Fraction, mpq) to an exact rational."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        try:
            return mpq(s)
        except ValueError:
            raise ValueError(f"not a rational: {x!r}") from None
    if isinstance(x, bool):
        raise TypeError("refusing to coerce bool to a rational")
    if isinstance(x, int):
        return mpq(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def qstr(x: Scalar) -> str:
    return str(x)


# -- sparse vector helpers ---------------------------------------------------


def sparse(values: Iterable) -> SparseVec:
    """Dense sequence -> sparse dict."""
    return {i: Q(v) for i, v in enumerate(values) if v != 0}


def dense(v: Mapping[int, Scalar], n: int) -> list:
    out = [ZERO] * n
    for i, c in v.items():
        out[i] = c
    return out


def vadd(u: Mapping, v: Mapping, c=ONE) -> SparseVec:
    """u + c*v"""
    out = dict(u)
    axpy(out, v, c)
    return out


def axpy(acc: dict, v: Mapping, c=ONE) -> None:
    """acc += c*v, in place."""
    if not c:
        return
    for i, x in v.items():
        y = acc.get(i, ZERO) + c * x
        if y:
            acc[i] = y
        else:
            acc.pop(i, None)


def vscale(v: Mapping, c) -> SparseVec:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vsub(u: Mapping, v: Mapping) -> SparseVec:
    return vadd(u, v, -ONE)


def vcanon(v: Mapping) -> tuple:
    """Hashable canonical form of a sparse vector."""
    return tuple(sorted(v.items()))


# -- dense matrices ----------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major, mpq

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"matrix {self.rows}x{self.cols} needs {self.rows * self.cols} entries,"
                f" got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(Q(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, Scalar]]) -> "Matrix":
        """Build from sparse column vectors."""
        cols = len(columns)
        data = [ZERO] * (rows * cols)
        for j, col in enumerate(columns):
            for i, x in col.items():
                data[i * cols + j] = Q(x)
        return cls(rows, cols, tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    @cached_property
    def sparse_columns(self) -> tuple:
        cols = [dict() for _ in range(self.cols)]
        for k, x in enumerate(self.entries):
            if x:
                cols[k % self.cols][k // self.cols] = x
        return tuple(cols)

    def column(self, j: int) -> SparseVec:
        return dict(self.sparse_columns[j])

    def apply(self, v: Mapping[int, Scalar]) -> SparseVec:
        """Matrix times sparse vector."""
        out: dict = {}
        cols = self.sparse_columns
        for j, c in v.items():
            axpy(out, cols[j], c)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        return Matrix.from_columns(self.rows, [self.apply(c) for c in other.sparse_columns])

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
                                cols=self.rows)

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        data = list(self.entries)
        data[i * self.cols + j] = Q(value)
        return Matrix(self.rows, self.cols, tuple(data))

    def is_zero(self) -> bool:
        return not any(self.entries)


# -- row echelon machinery ---------------------------------------------------


class _Echelon:
    """Incremental echelon basis over sparse rows (pivot -> row, leading 1)."""

    def __init__(self):
        self.rows: dict = {}

    def reduce(self, v: Mapping) -> SparseVec:
        v = dict(v)
        if not self.rows:
            return v
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        rows = self.rows
        while heap:
            k = heapq.heappop(heap)
            seen.discard(k)
            c = v.get(k)
            if c is None or k not in rows:
                continue
            for j, x in rows[k].items():
                y = v.get(j, ZERO) - c * x
                if y:
                    if j not in v and j not in seen:
                        heapq.heappush(heap, j)
                        seen.add(j)
                    v[j] = y
                else:
                    v.pop(j, None)
        return v

    def insert(self, v: Mapping) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = ONE / r[p]
        self.rows[p] = {j: x * inv for j, x in r.items()}
        return True

    def to_rref(self) -> tuple:
        pivots = sorted(self.rows)
        pivset = set(pivots)
        done: dict = {}
        for p in reversed(pivots):
            row = dict(self.rows[p])
            for j in sorted(k for k in row if k in pivset and k != p):
                c = row.get(j)
                if c:
                    axpy(row, done[j], -c)
            done[p] = row
        return tuple(pivots), tuple(done[p] for p in pivots)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of Q^ambient_dim in canonical RREF form.

    ``rows[i]`` is a sparse row whose leading entry is 1 at ``pivots[i]`` and
    which vanishes on every other pivot column.
    """

    ambient_dim: int
    pivots: tuple
    rows: tuple

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping]) -> "Subspace":
        ech = _Echelon()
        for v in vectors:
            for i in v:
                if not 0 <= i < ambient_dim:
                    raise IndexError(f"coordinate {i} outside ambient dimension {ambient_dim}")
            ech.insert(v)
        pivots, rows = ech.to_rref()
        return cls(ambient_dim, pivots, rows)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(range(ambient_dim)),
                   tuple({i: ONE} for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @cached_property
    def _pivot_row(self) -> dict:
        return dict(zip(self.pivots, self.rows))

    @property
    def basis(self) -> Matrix:
        return Matrix.from_columns(self.ambient_dim, self.rows).transpose()

    def reduce(self, v: Mapping) -> SparseVec:
        """Canonical representative of v modulo this subspace (pivot coords zeroed)."""
        pr = self._pivot_row
        out = dict(v)
        for p in [k for k in v if k in pr]:
            c = v[p]
            axpy(out, pr[p], -c)
        return out

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.pivots == other.pivots
                and all(vcanon(a) == vcanon(b) for a, b in zip(self.rows, other.rows)))

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient_dim, list(self.rows) + list(other.rows))


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    ambient_dim: int
    kernel: Subspace

    @classmethod
    def of(cls, kernel: Subspace) -> "QuotientSpace":
        return cls(kernel.ambient_dim, kernel)

    @cached_property
    def section(self) -> tuple:
        """Non-pivot coordinates; their unit vectors represent a basis of the quotient."""
        piv = set(self.kernel.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in piv)

    @cached_property
    def _section_index(self) -> dict:
        return {c: k for k, c in enumerate(self.section)}

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.kernel.dim

    def reduce(self, v: Mapping) -> SparseVec:
        return self.kernel.reduce(v)

    def coords(self, v: Mapping) -> SparseVec:
        """Coordinates of the class of v in the quotient basis (sparse)."""
        idx = self._section_index
        return {idx[i]: c for i, c in self.reduce(v).items()}

    def lift(self, coords: Mapping) -> SparseVec:
        sec = self.section
        return {sec[k]: Q(c) for k, c in coords.items() if c}


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form with zero rows dropped."""
    sub = Subspace.span(m.cols, (sparse(m.row(i)) for i in range(m.rows)))
    rows = [dense(r, m.cols) for r in sub.rows]
    return Matrix(len(rows), m.cols, tuple(x for r in rows for x in r))


def quotient_reduce(q: QuotientSpace, v) -> list:
    """Dense-vector front end of ``QuotientSpace.reduce``."""
    if len(v) != q.ambient_dim:
        raise ValueError("vector length does not match ambient dimension")
    return dense(q.reduce(sparse(v)), q.ambient_dim)


def solve_sparse(columns: Sequence[Mapping], b: Mapping, nrows: int):
    """Solve A x = b with A given by sparse columns.

    Returns ``(particular, nullspace)`` with ``particular`` a sparse vector and
    ``nullspace`` a Subspace of Q^ncols, or None when inconsistent.
    """
    ncols = len(columns)
    # rows of the augmented matrix [A | b], b stored at column ncols
    rows = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                rows[i][j] = Q(x)
    for i, x in b.items():
        if x:
            rows[i][ncols] = Q(x)
    ech = _Echelon()
    for r in rows:
        ech.insert(r)
    pivots, rr = ech.to_rref()
    if ncols in pivots:
        return None
    particular = {}
    for p, r in zip(pivots, rr):
        c = r.get(ncols)
        if c:
            particular[p] = c
    pivset = set(pivots)
    null = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: ONE}
        for p, r in zip(pivots, rr):
            c = r.get(f)
            if c:
                v[p] = -c
        null.append(v)
    return particular, Subspace.span(ncols, null)


def solve_linear(A: Matrix, b: Sequence):
    """Dense front end: returns ``(particular, nullspace)`` or None."""
    if len(b) != A.rows:
        raise ValueError("right-hand side length must equal row count")
    res = solve_sparse(A.sparse_columns, sparse(b), A.rows)
    if res is None:
        return None
    part, null = res
    return dense(part, A.cols), null
