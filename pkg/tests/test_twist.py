import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopftwist.antipode import AntipodePair, check_hopf
from hopftwist.instances import sweedler_twist
from hopftwist.linalg import ONE, Q, vcanon
from hopftwist.twist import (Cocycle, check_cocycle, coboundary, compute_VF, find_cocycles,
                             invert_cocycle, observation_equivalence, twist_base, twist_structure,
                             twisted_diagnostics, untwist_roundtrip, verify_main_theorem)

from conftest import ALL, instance, pairs, twisted

HALF = Q(1) / 2
# Z2 x Z2 as pairs (a, b) at index 2a + b; g1 = (1, 0) = 2, g2 = (0, 1) = 1
G1, G2, G12 = 2, 1, 3


def klein_mul(x, y):
    """Oracle product on Q[Z2 x Z2] with elements as {(a, b): coeff}."""
    out = {}
    for (a, b), c in x.items():
        for (p, q), d in y.items():
            k = ((a + p) % 2, (b + q) % 2)
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def as_pairs(v):
    return {divmod(i, 2): c for i, c in v.items()}


@pytest.mark.parametrize("name", ALL)
def test_identity_twist_is_a_fixed_point(name):
    B, A = instance(name)
    c, rep, T = twisted(name, "identity")
    assert rep.ok, rep.failures
    assert T.R_F.same_as(B.R)
    assert T.alpha_F.matrix == B.ctx.alpha.matrix and T.beta_F.matrix == B.ctx.beta.matrix
    assert T.I_RF == B.ctx.I_R
    assert T.instance.canonical_delta == B.canonical_delta
    assert T.V_F == B.H.unit_vec and T.V_F_inv == B.H.unit_vec
    assert T.antipode.S == A.S and T.antipode.S_inv == A.S_inv


def test_klein_twist_matches_the_closed_form():
    B, A = instance("z2xz2")
    c, rep, T = twisted("z2xz2", "factor pairing")
    n = 4
    expect = {0 * n + 0: HALF, 0 * n + G1: HALF, G2 * n + 0: HALF, G2 * n + G1: -HALF}
    assert vcanon(c.F_lift) == vcanon(expect)
    assert vcanon(T.cocycle.Fbar_lift) == vcanon(expect)  # F squares to 1 (x) 1
    assert rep.ok, rep.failures


def test_klein_V_and_its_square():
    B, A = instance("z2xz2")
    c, _, T = twisted("z2xz2", "factor pairing")
    V, Vinv, rep = compute_VF(c, A)
    expect = {0: HALF, G1: HALF, G2: HALF, G12: -HALF}
    assert vcanon(V) == vcanon(expect)
    # oracle: the element (1 + g1 + g2 - g1 g2) / 2 is an involution
    sq = klein_mul(as_pairs(expect), as_pairs(expect))
    assert sq == {(0, 0): ONE}
    assert vcanon(Vinv) == vcanon(V)
    # V is central, so the conjugated antipode is S itself
    assert T.antipode.S == A.S


def test_klein_twist_keeps_the_coproduct_of_grouplikes_only_up_to_conjugation():
    B, _ = instance("z2xz2")
    _, _, T = twisted("z2xz2", "factor pairing")
    # commutative and cocommutative H: Delta_F = Fbar Delta F = Delta
    assert T.instance.canonical_delta == B.canonical_delta


def test_z2_self_pairing_is_decided_by_the_checker():
    B, A = instance("z2")
    c, rep, T = twisted("z2", "self-pairing")
    assert len(c.F_lift) == 4
    assert check_cocycle(c).ok == rep.get("cocycle identity").ok
    assert rep.ok


def test_non_cocycle_perturbation_fails():
    B, _ = instance("z2xz2")
    # 1 (x) 1 + (1 - g1) (x) (1 - g2) is counital but not a cocycle
    F = {0: Q(2), G2: -ONE, G1 * 4: -ONE, G1 * 4 + G2: ONE}
    rep = check_cocycle(Cocycle.of(B, F))
    assert rep.status("cocycle identity") == "fail"
    assert rep.status("(id (x)_R eps)F = 1") == "pass"
    # 1 (x) 1 + g1 (x) g2 is not counital
    rep = check_cocycle(Cocycle.of(B, {0: ONE, G1 * 4 + G2: ONE}))
    assert rep.status("(id (x)_R eps)F = 1") == "fail"


def test_inversion():
    B, _ = instance("groupoid2")
    one = B.ctx.one2()
    X = invert_cocycle(B, one)
    assert vcanon(B.ctx.reduce2(X)) == vcanon(B.ctx.reduce2(one))
    assert invert_cocycle(B, {}) is None


def test_base_field_twisted_product_is_unchanged():
    for name in ("z2", "sweedler"):
        B, _ = instance(name)
        for cname, cc in pairs_of(name).items():
            assert twist_base(cc).same_as(B.R)


def pairs_of(name):
    from hopftwist.instances import bundled_cocycles
    B, _ = instance(name)
    return {"identity": Cocycle.identity(B), **bundled_cocycles(name, B)}


@pytest.mark.parametrize("name,cocycle", pairs())
def test_main_theorem_and_round_trip(name, cocycle):
    B, A = instance(name)
    c, rep, T = twisted(name, cocycle)
    assert rep.ok, rep.failures
    assert T.antipode is not None
    rt = untwist_roundtrip(c, A, T)
    assert rt.ok, rt.failures
    assert rt.status("V_{F^-1} = V_F^-1") == "pass"


@pytest.mark.parametrize("name,cocycle", pairs())
def test_observation_equivalence(name, cocycle):
    c, _, T = twisted(name, cocycle)
    assert observation_equivalence(c, T).ok


def test_groupoid_twist_changes_coproduct_and_antipode():
    B, A = instance("groupoid2_s3")
    c, rep, T = twisted("groupoid2_s3", "diagonal transposition")
    assert rep.ok
    assert T.instance.canonical_delta != B.canonical_delta
    assert T.antipode.S != A.S


def test_sweedler_twist_is_invariant():
    # gx (x) x commutes with Delta(g) and Delta(x) (x^2 = 0, gxg = -x), so
    # Delta_F = Delta; and V_F = 1 + (t/2) S(gx) x = 1 + (t/2) x^2 = 1
    B, A = instance("sweedler")
    c, rep, T = twisted("sweedler", "t=1")
    assert rep.ok
    assert T.V_F == B.H.unit_vec
    assert T.antipode.S == A.S
    assert T.instance.canonical_delta == B.canonical_delta
    assert check_hopf(T.instance, T.antipode).ok


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_sweedler_family(t):
    B, A = instance("sweedler")
    c = sweedler_twist(B, Q(t))
    rep, T = verify_main_theorem(c, A)
    assert rep.ok, rep.failures


@given(st.integers(0, 3), st.sampled_from(["1", "-1/2", "2", "1/3"]))
def test_gauge_cocycles_on_the_groupoid(i, t):
    B, A = instance("groupoid2")
    H = B.H
    u = dict(H.unit_vec)
    u[i] = u.get(i, 0) + Q(t)
    u = {k: v for k, v in u.items() if v}
    F = coboundary(B, u)
    if F is None:
        return
    # always a cocycle; counital only when eps(u) = 1
    rep = check_cocycle(Cocycle.of(B, F, invert_cocycle(B, F)))
    assert rep.status("cocycle identity") == "pass"
    if rep.ok:
        mrep, _ = verify_main_theorem(Cocycle.of(B, F, invert_cocycle(B, F)), A)
        assert mrep.ok, mrep.failures


def test_search_on_the_noncommutative_pair_algebroid():
    B, A = instance("pair_m2")
    found, rep = find_cocycles(B, [Q(1), Q(2)], limit=4)
    assert found, "search found no cocycle"
    c = found[0]
    mrep, T = verify_main_theorem(c, A)
    assert mrep.ok, mrep.failures
    assert not T.R_F.is_commutative()
    rt = untwist_roundtrip(c, A, T)
    assert rt.ok, rt.failures


def test_search_on_the_groupoid_gives_associative_twisted_bases():
    B, A = instance("groupoid2")
    found, rep = find_cocycles(B, [Q(1), Q(2)], limit=4)
    assert found
    for c in found:
        mrep, T = verify_main_theorem(c, A)
        assert mrep.ok
        assert T.R_F.check().ok
        assert mrep.status("I_RF = span(Fbar I_R)") == "pass"


def test_corrupted_twisted_antipode_fails():
    B, A = instance("z2xz2")
    _, _, T = twisted("z2xz2", "factor pairing")
    S = T.antipode.S.with_entry(0, 1, T.antipode.S[0, 1] + 1)
    rep = check_hopf(T.instance, AntipodePair.from_matrix(S))
    assert not rep.ok
    assert any(f.witness and ("h" in f.witness or "x" in f.witness) for f in rep.failures)


def test_twisted_coring_diagnostic_on_the_groupoid():
    # every defining axiom holds, the coring identity does not
    B, A = instance("groupoid2")
    found, _ = find_cocycles(B, [Q(1)], limit=2)
    results = []
    for c in found:
        mrep, T = verify_main_theorem(c, A)
        assert mrep.ok
        results.append(twisted_diagnostics(T).ok)
    assert False in results
