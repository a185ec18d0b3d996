import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopftwist.algebra import AlgebraMap
from hopftwist.instances import (build_groupoid_algebroid, disjoint_union, group_as_groupoid, GroupoidTable,
                                 groupoid_times_group, pair_groupoid, symmetric_group, Z2)
from hopftwist.linalg import ONE, Matrix, Q, vadd, vcanon
from hopftwist.rtensor import (CommutationFailure, IllDefined, TensorContext, check_lift_independence,
                               factorwise_left_multiply, flip_lift, flip_to_opposite, outer,
                               stabilizes_kernel)

from conftest import instance

coeffs = st.integers(-2, 2)


def arrows_into(gt):
    counts = [0] * gt.objects
    for s, t in gt.morphisms:
        counts[t] += 1
    return counts


def test_base_field_has_no_relators():
    B, _ = instance("z2xz2")
    assert B.ctx.I_R.dim == 0
    assert B.ctx.Q2.dim == 16


def test_pair_m2_dimensions():
    # H (x)_R H = (R (x) R^op) (x)_R (R (x) R^op) is R^(x)3 as a vector space
    B, _ = instance("pair_m2")
    ctx = B.ctx
    assert ctx.n == 16
    assert ctx.Q2.dim == 4 ** 3
    assert ctx.I_R.dim == 256 - 64
    assert ctx.Q3.dim == 4 ** 4


@pytest.mark.parametrize("gt", [pair_groupoid(2), pair_groupoid(3),
                                disjoint_union(group_as_groupoid(Z2), pair_groupoid(2)),
                                groupoid_times_group(pair_groupoid(2), symmetric_group(3))],
                         ids=["pair2", "pair3", "z2+pair2", "pair2xS3"])
def test_groupoid_dimensions(gt):
    # f (x) g survives only when f and g have the same target
    B, _ = build_groupoid_algebroid(gt, verify=False)
    inn = arrows_into(gt)
    assert B.ctx.Q2.dim == sum(k * k for k in inn)
    assert B.ctx.Q3.dim == sum(k ** 3 for k in inn)


def test_groupoid_dimension_stable_under_relabelling():
    gt = pair_groupoid(3)
    n = len(gt.morphisms)
    perm = list(range(n))
    random.Random(3).shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    morph = [gt.morphisms[inv[i]] for i in range(n)]
    prod = [[None if gt.product[inv[f]][inv[g]] is None else perm[gt.product[inv[f]][inv[g]]]
             for g in range(n)] for f in range(n)]
    invs = [perm[gt.inverse[inv[f]]] for f in range(n)]
    relabelled = GroupoidTable.of(gt.objects, morph, prod, invs)
    a, _ = build_groupoid_algebroid(gt, verify=False)
    b, _ = build_groupoid_algebroid(relabelled, verify=False)
    assert a.ctx.I_R.dim == b.ctx.I_R.dim


def test_commutation_failure_raised():
    B, _ = instance("pair_m2")
    ctx = B.ctx
    # target r -> alpha(r^T) is an algebra map from R^op, but its image is alpha(R)
    transpose = [0, 2, 1, 3]
    cols = [ctx.alpha.image(transpose[r]) for r in range(4)]
    bad = Matrix.from_columns(16, cols)
    with pytest.raises(CommutationFailure):
        TensorContext(ctx.H, ctx.R, ctx.alpha, AlgebraMap(ctx.R.opposite(), ctx.H, bad))


@pytest.mark.parametrize("name", ["groupoid2", "pair_qz2", "pair_m2"])
def test_kernel_is_a_right_ideal(name):
    B, _ = instance(name)
    ctx = B.ctx
    rng = random.Random(0)
    for k in rng.sample(ctx.relators2, 20):
        yz = rng.randrange(ctx.n ** 2)
        assert ctx.I_R.contains(ctx.mul2(k, {yz: ONE}))


def test_factorwise_multiplication_by_unit_and_delta():
    B, _ = instance("pair_m2")
    ctx = B.ctx
    t = ctx.coset2({3 * 16 + 5: ONE, 7: Q(2)})
    assert factorwise_left_multiply(t, ctx.one2()) == t
    # a Delta lift passes the check
    factorwise_left_multiply(t, B.delta_basis(6))


def test_factorwise_multiplication_ill_defined_witness():
    B, _ = instance("pair_m2")
    ctx = B.ctx
    # x (x) 1 with x = beta(E12) does not commute with beta(R)
    x = ctx.beta.image(1)
    m = outer(x, ctx.H.unit_vec, ctx.n)
    assert stabilizes_kernel(ctx, m) is not None
    with pytest.raises(IllDefined) as exc:
        factorwise_left_multiply(ctx.coset2({0: ONE}), m)
    assert "kernel_vector" in exc.value.witness


@pytest.mark.parametrize("name", ["groupoid2", "pair_m2"])
def test_flip(name):
    B, _ = instance(name)
    ctx = B.ctx
    one = ctx.coset2(ctx.one2())
    assert flip_to_opposite(one) == ctx.opposite().coset2(ctx.one2())
    t = ctx.coset2({5: ONE, 9: Q(-3)})
    assert flip_to_opposite(flip_to_opposite(t)) == t
    op = ctx.opposite()
    for k in ctx.relators2[:40]:
        assert op.I_R.contains(flip_lift(k, ctx.n))


def test_lift_independence_helper():
    B, _ = instance("groupoid2")
    ctx = B.ctx
    t = ctx.coset2(B.delta_basis(1))
    assert check_lift_independence(lambda v: ctx.reduce2(v), t).ok
    bad = check_lift_independence(lambda v: v, t)
    assert not bad.ok and bad.checks[0].witness["perturbation"] >= 0


@given(st.lists(coeffs, min_size=16, max_size=16), st.integers(0, 3))
def test_delta_multiplication_is_independent_of_lift(v, h):
    B, _ = instance("groupoid2")
    ctx = B.ctx
    vec = {i: Q(c) for i, c in enumerate(v) if c}
    base = ctx.reduce2(ctx.mul2(B.delta_basis(h), vec))
    for k in ctx.relators2[::3]:
        assert vcanon(ctx.reduce2(ctx.mul2(B.delta_basis(h), vadd(vec, k)))) == vcanon(base)


@given(st.lists(coeffs, min_size=16, max_size=16))
def test_cosets_add_and_reduce(v):
    B, _ = instance("pair_qz2")
    ctx = B.ctx
    vec = {i: Q(c) for i, c in enumerate(v) if c}
    a = ctx.coset2(vec)
    assert ctx.coset2(a.lift) == a
    assert (a + ctx.coset2({i: -c for i, c in vec.items()})).is_zero()
