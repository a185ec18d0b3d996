import itertools

import pytest

from hopftwist.algebra import Algebra
from hopftwist.antipode import check_hopf
from hopftwist.bialgebroid import check_bialgebroid
from hopftwist.instances import (GroupoidTable, GroupTable, InvalidTable, NotAbelian, NotBicharacter,
                                 Z2, Z2xZ2, build_bicharacter_cocycle, build_group_hopf,
                                 build_groupoid_algebroid, build_pair_algebroid, characters, cyclic_group,
                                 direct_product, disjoint_union, form_bicharacter, group_as_groupoid,
                                 pair_groupoid, symmetric_group)
from hopftwist.linalg import ONE, Q
from hopftwist.twist import Cocycle, check_cocycle

from conftest import ALL, instance

HALF = Q(1) / 2


@pytest.mark.parametrize("name", ALL)
def test_catalog_instances_pass_their_suites(name):
    B, A = instance(name)
    assert check_bialgebroid(B).ok
    assert check_hopf(B, A).ok


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cyclic_group_algebra(k):
    B, A = build_group_hopf(cyclic_group(k))
    assert B.n == k and B.R.dim == 1
    # g^i g^j = g^(i+j mod k), S(g^i) = g^-i
    for i, j in itertools.product(range(k), repeat=2):
        assert B.H.multiply({i: ONE}, {j: ONE}) == {(i + j) % k: ONE}
    assert all(A.S[(k - i) % k, i] == 1 for i in range(k))


def test_trivial_group_gives_the_ground_field():
    B, A = instance("trivial")
    assert B.n == 1
    assert B.canonical_delta.to_rows() == [[1]]
    assert A.S.to_rows() == [[1]]


def test_symmetric_group_is_a_group_and_not_abelian():
    S3 = symmetric_group(3)
    assert S3.order == 6
    assert not S3.is_abelian()
    B, A = build_group_hopf(S3)
    assert check_hopf(B, A).ok


def test_one_object_groupoid_has_no_relators():
    B, _ = build_groupoid_algebroid(group_as_groupoid(Z2))
    assert B.ctx.I_R.dim == 0
    assert B.ctx.Q2.dim == 4


def test_pair_groupoid_on_two_objects():
    B, A = instance("groupoid2")
    assert B.n == 4 and B.R.dim == 2
    assert B.ctx.I_R.dim > 0
    # each object receives two arrows: 2^2 + 2^2
    assert B.ctx.Q2.dim == 8


def test_disjoint_union_of_z2s():
    gt = disjoint_union(group_as_groupoid(Z2), group_as_groupoid(Z2))
    assert gt.objects == 2 and len(gt.morphisms) == 4
    B, A = build_groupoid_algebroid(gt)
    assert B.ctx.Q2.dim == 8


def test_pair_algebroid_over_the_ground_field_is_trivial():
    B, A = build_pair_algebroid(Algebra.ground_field())
    assert B.n == 1
    assert check_hopf(B, A).ok


def test_pair_algebroid_over_qz2():
    B, A = instance("pair_qz2")
    assert B.n == 4
    assert B.ctx.Q2.dim == 8
    # S^2 = id, so S is its own inverse
    assert A.S == A.S_inv
    assert A.S @ A.S == A.S_inv @ A.S


def test_pair_m2_dimension():
    B, _ = instance("pair_m2")
    assert B.n == 16 and B.ctx.Q2.dim == 64


@pytest.mark.parametrize("bad", [
    [[0, 1], [1, 1]],       # 1 has no inverse
    [[0, 1], [0, 1]],       # not a Latin square
    [[0, 1, 2], [1, 2, 0]],  # not square
    [[0, 2], [1, 0]],       # entry out of range
])
def test_invalid_group_tables(bad):
    with pytest.raises(InvalidTable):
        GroupTable.of(bad)


def test_non_associative_table_is_rejected():
    # a Latin square with identity 0 that is not associative
    L = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidTable):
        GroupTable.of(L)


def test_invalid_groupoid_table():
    gt = pair_groupoid(2)
    prod = [list(r) for r in gt.product]
    # compose two arrows whose endpoints do not match
    prod[0][3] = 0
    with pytest.raises(InvalidTable):
        GroupoidTable.of(gt.objects, gt.morphisms, prod)


def test_trivial_bicharacter_is_the_identity_cocycle():
    B, _ = instance("z2xz2")
    chi = [[1] * 4 for _ in range(4)]
    c = build_bicharacter_cocycle(B, Z2xZ2, chi)
    assert c.F_lift == {0: ONE}
    assert c.F_lift == Cocycle.identity(B).F_lift


def test_z2_self_pairing_has_four_terms():
    # sum over a, b of (-1)^(ab) P_a (x) P_b with P_0 = (1+g)/2, P_1 = (1-g)/2
    B, _ = instance("z2")
    c = build_bicharacter_cocycle(B, Z2, form_bicharacter(Z2, [[1]]))
    assert c.F_lift == {0: HALF, 1: HALF, 2: HALF, 3: -HALF}
    assert check_cocycle(c).ok


def test_klein_factor_pairing_closed_form():
    B, _ = instance("z2xz2")
    c = build_bicharacter_cocycle(B, Z2xZ2, form_bicharacter(Z2xZ2, [[0, 0], [1, 0]], [2, 1]), [2, 1])
    g1, g2, n = 2, 1, 4
    want = {0: HALF, 0 * n + g1: HALF, g2 * n + 0: HALF, g2 * n + g1: -HALF}
    assert c.F_lift == want
    assert c.Fbar_lift == want


def test_characters_are_multiplicative():
    chars = characters(Z2xZ2)
    p = Z2xZ2.product
    for ch in chars:
        for x, y in itertools.product(range(4), repeat=2):
            assert ch[p[x][y]] == ch[x] * ch[y]
    assert len({tuple(ch) for ch in chars}) == 4


def test_non_abelian_group_is_refused():
    S3 = symmetric_group(3)
    B, _ = build_group_hopf(S3)
    with pytest.raises(NotAbelian):
        build_bicharacter_cocycle(B, S3, [[1]])


def test_non_multiplicative_chi_is_refused():
    B, _ = instance("z2")
    with pytest.raises(NotBicharacter) as exc:
        build_bicharacter_cocycle(B, Z2, [[1, -1], [1, 1]])
    assert exc.value.pair is not None


def test_direct_product_order():
    g = direct_product(cyclic_group(2), cyclic_group(3))
    assert g.order == 6 and g.is_abelian()
