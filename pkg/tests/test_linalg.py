from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hopftwist.linalg import (ONE, Matrix, Q, QuotientSpace, Subspace, dense, quotient_reduce, rref,
                              solve_linear, solve_sparse, sparse, vadd, vcanon)

small = st.integers(-3, 3)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def matrices(rows, cols):
    return st.lists(st.lists(rationals, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_coercion():
    assert Q("3/6") == Q(1) / 2
    assert Q(Fraction(2, 4)) == Q("1/2")
    with pytest.raises(ValueError):
        Q("1/x")
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(TypeError):
        Q(True)


def test_rref_trivial_examples():
    I = Matrix.identity(3)
    assert rref(I) == I
    assert rref(Matrix.from_rows([[2, 4], [1, 2]])).to_rows() == [[1, 2]]


@given(matrices(6, 6))
def test_rref_row_space_matches_input(rows):
    M = Matrix.from_rows(rows)
    E = rref(M)
    a = Subspace.span(6, [sparse(r) for r in M.to_rows()])
    b = Subspace.span(6, [sparse(r) for r in E.to_rows()])
    # mutual membership of rows
    assert all(b.contains(sparse(r)) for r in M.to_rows())
    assert all(a.contains(sparse(r)) for r in E.to_rows())
    assert E.rows == sympy.Matrix(rows).rank()


@given(matrices(4, 5))
def test_rref_agrees_with_sympy(rows):
    ours = rref(Matrix.from_rows(rows)).to_rows()
    theirs, _ = sympy.Matrix(rows).rref()
    expect = [list(theirs.row(i)) for i in range(theirs.rows) if any(theirs.row(i))]
    assert [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in ours] == \
        [[Fraction(int(x.p), int(x.q)) for x in r] for r in expect]


def test_solve_examples():
    part, null = solve_linear(Matrix.identity(3), [1, 2, 3])
    assert part == [1, 2, 3] and null.dim == 0
    part, null = solve_linear(Matrix.zeros(2, 3), [0, 0])
    assert part == [0, 0, 0] and null.dim == 3
    part, null = solve_linear(Matrix.from_rows([[1, 1]]), [1])
    assert part[0] + part[1] == 1 and null.dim == 1
    assert solve_linear(Matrix.zeros(1, 1), [1]) is None


@given(matrices(4, 3), st.lists(rationals, min_size=4, max_size=4))
def test_solve_by_substitution(rows, b):
    A = Matrix.from_rows(rows, 3)
    res = solve_sparse(A.sparse_columns, sparse(b), 4)
    consistent = sympy.Matrix(rows).rank() == sympy.Matrix([r + [x] for r, x in zip(rows, b)]).rank()
    assert (res is not None) == consistent
    if res is not None:
        part, null = res
        assert vcanon(A.apply(part)) == vcanon(sparse(b))
        for v in null.rows:
            assert not A.apply(v)
        assert null.dim == 3 - sympy.Matrix(rows).rank()


@given(matrices(3, 5), st.lists(rationals, min_size=5, max_size=5))
def test_quotient_reduce_is_a_projection(rows, v):
    K = Subspace.span(5, [sparse(r) for r in rows])
    q = QuotientSpace.of(K)
    r = q.reduce(sparse(v))
    assert K.contains(vadd(sparse(v), r, -ONE))
    assert vcanon(q.reduce(r)) == vcanon(r)
    assert set(r) <= set(q.section)
    assert q.dim == 5 - K.dim
    assert quotient_reduce(q, v) == dense(r, 5)


def test_quotient_trivial_cases():
    q = QuotientSpace.of(Subspace.zero(3))
    assert q.reduce({0: ONE, 2: Q(5)}) == {0: ONE, 2: Q(5)}
    K = Subspace.span(3, [{0: ONE, 1: ONE}])
    assert QuotientSpace.of(K).reduce({0: Q(2), 1: Q(2)}) == {}


@given(matrices(3, 4), matrices(2, 4))
def test_subspace_sum_and_equality(a, b):
    A = Subspace.span(4, [sparse(r) for r in a])
    B = Subspace.span(4, [sparse(r) for r in b])
    S = A + B
    assert S.contains_subspace(A) and S.contains_subspace(B)
    assert S.dim == sympy.Matrix(a + b).rank()
    assert A + B == B + A
