import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopftwist.antipode import AntipodePair
from hopftwist.cli import bind
from hopftwist.linalg import ONE, Q
from hopftwist.rtensor import ArityError, IllDefined
from hopftwist.sweedler import (Act, Binding, DSLSyntaxError, Evaluator, Gen, Identity, Map, Num, Prod,
                                Split, Sum, Tensor, UnboundGenerator, equal, evaluate, load_corpus,
                                parse, parse_corpus, requirements, run_corpus, scale, to_text)
from hopftwist.twist import Cocycle

from conftest import instance, pairs, twisted

CORPUS = load_corpus()
SMALL_PAIRS = [p for p in pairs() if p[0] not in ("pair_m2", "groupoid2_s3")]


def binding(name, cocycle=None, seed=None):
    B, A = instance(name)
    if cocycle is None:
        return Binding(B, A, perturb=seed)
    c, _, T = twisted(name, cocycle)
    return bind(B, A, c, seed)


# -- parser ----------------------------------------------------------------------


def test_unit_tensor_antipode():
    node = parse("1 (x)R S(h)")
    assert node == Tensor((Num(ONE), Map("S", Gen("h"))), "R")


def test_nested_split_on_a_map():
    text = "S(F1)_(1) * F2 (x)R S(F1)_(2) * S(h) * V"
    node = parse(text)
    left, right = node.legs
    assert left == Prod((Split(Map("S", Gen("F1")), 1), Gen("F2")))
    assert right.factors[0] == Split(Map("S", Gen("F1")), 2)
    assert to_text(node) == text
    assert parse(to_text(node)) == node


def test_cocycle_identity_component_form():
    node = parse("F1_(1) * F1' (x)R F1_(2) * F2' (x)R F2 == F1 (x)R F2_(1)*F1' (x)R F2_(2)*F2'")
    assert isinstance(node, Identity)
    assert len(node.lhs.legs) == 3 and len(node.rhs.legs) == 3
    assert node.lhs.legs[0] == Prod((Split(Gen("F1"), 1), Gen("F1", 1)))
    assert node.rhs.legs[2] == Prod((Split(Gen("F2"), 2), Gen("F2", 1)))


@pytest.mark.parametrize("text, line, col", [
    ("S(h", 1, 4),
    ("h ==", 1, 5),
    ("h_(3) (x)R h_(2) == h", 1, 2),
    ("1 (x)R\n  S(h) +* h", 2, 9),
    ("T(h) == h", 1, 1),
    ("h $ h", 1, 3),
])
def test_syntax_errors_carry_positions(text, line, col):
    with pytest.raises(DSLSyntaxError) as exc:
        parse(text)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert f"{line}:{col}" in str(exc.value)


def test_unpaired_family_is_rejected():
    with pytest.raises(DSLSyntaxError):
        parse("F1 == 1")
    with pytest.raises(DSLSyntaxError):
        parse("h_(1) == h")


def test_mixed_tensor_tags_are_rejected():
    with pytest.raises(DSLSyntaxError):
        parse("h (x)R h (x)RF h")


def test_corpus_parses_and_round_trips():
    assert len(CORPUS) >= 30
    for e in CORPUS:
        node = parse(e.text)
        assert parse(to_text(node)) == node


def test_corpus_file_format():
    entries = parse_corpus("# comment\n[one]\nnative: hopf / x\nh\n  == h\n\n[two]\n1 == 1\n")
    assert [e.name for e in entries] == ["one", "two"]
    assert entries[0].text == "h == h"
    assert entries[0].native == ("hopf", "x")
    with pytest.raises(DSLSyntaxError):
        parse_corpus("[empty]\n[next]\nh == h\n")


# ASTs built from self-contained paired blocks, so every generated tree is well formed
_leaf = st.one_of(
    st.sampled_from([Gen("h"), Gen("g"), Gen("r"), Gen("V"), Gen("Vinv")]),
    st.fractions(min_value=0, max_value=5, max_denominator=4).map(lambda f: Num(Q(f))),
)


def _paired(child):
    split = st.builds(lambda x, tw: (Split(x, 1, tw), Split(x, 2, tw)), child, st.booleans())
    fam = st.builds(lambda name, p: (Gen(name + "1", p), Gen(name + "2", p)),
                    st.sampled_from(["F", "Fbar"]), st.integers(0, 2))
    return st.one_of(split, fam).flatmap(lambda pr: st.sampled_from([
        Prod(pr), Tensor(pr, "R"), Tensor(pr, "RF")]))


def _extend(child):
    return st.one_of(
        st.builds(Map, st.sampled_from(["S", "Sinv", "SF", "eps", "alpha"]), child),
        st.lists(child, min_size=2, max_size=3).map(lambda fs: Prod(tuple(fs))),
        st.builds(Act, child, child),
        st.lists(child, min_size=2, max_size=3).map(lambda ls: Tensor(tuple(ls), "R")),
        st.lists(st.tuples(st.sampled_from([1, -1]), child), min_size=2, max_size=3)
        .map(lambda ts: Sum(tuple(ts))),
        _paired(child),
    )


ASTS = st.recursive(_leaf, _extend, max_leaves=8)


@given(ASTS)
def test_print_parse_round_trip(node):
    assert parse(to_text(node)) == node


@given(ASTS, ASTS)
def test_identity_round_trip(lhs, rhs):
    node = Identity(lhs, rhs)
    assert parse(to_text(node)) == node


# -- evaluation --------------------------------------------------------------------


def test_requirements():
    assert requirements(parse("S(h) == h")) == {"antipode"}
    assert requirements(parse("Vinv == 1")) == {"cocycle", "antipode", "V inverse"}
    assert "twisted antipode" in requirements(parse("SF(h) == h"))
    assert requirements(parse("S(h)_(1) (x)RS S(h)_(2) == h (x)RS h")) == {"antipode"}


@pytest.mark.parametrize("name, cocycle", SMALL_PAIRS)
def test_corpus_passes_on_every_small_binding(name, cocycle):
    rep = run_corpus(CORPUS, binding(name, cocycle))
    assert rep.ok, [(f.name, f.witness) for f in rep.failures]


def test_corpus_on_the_klein_twist_runs_everything():
    rep = run_corpus(CORPUS, binding("z2xz2", "factor pairing"))
    assert rep.ok
    assert not [c for c in rep.checks if c.status == "skipped"]


def test_binding_without_antipode_skips_antipode_identities():
    B, _ = instance("z2xz2")
    rep = run_corpus(CORPUS, Binding(B))
    assert rep.status("antipode axiom") == "skipped"
    assert "no antipode" in rep.get("antipode axiom").detail
    assert rep.status("coassociativity") == "pass"


def test_counitality_text_on_a_verified_cocycle():
    for name, coc in [("z2xz2", "factor pairing"), ("groupoid2_s3", "diagonal transposition")]:
        b = binding(name, coc)
        assert evaluate(parse("beta(eps(F2)) * F1 == 1"), b)[0]
        assert evaluate(parse("alpha(eps(F1)) * F2 == 1"), b)[0]


def test_antipode_on_the_first_leg_in_V_free_form():
    b = binding("z2xz2", "factor pairing")
    ok, _ = evaluate(parse("S(F1_(1))_(1) * F1_(2) (x)R S(F1_(1))_(2) * F2 == 1 (x)R S(F1) * F2"), b)
    assert ok


def test_corrupted_twisted_antipode_fails_with_a_basis_witness():
    B, A = instance("z2xz2")
    c, _, T = twisted("z2xz2", "factor pairing")
    S = T.antipode.S.with_entry(0, 1, T.antipode.S[0, 1] + 1)
    bad = T.with_antipode(T.V_F, T.V_F_inv, AntipodePair.from_matrix(S))
    b = Binding(B, A, c, bad)
    ok, witness = evaluate(parse("SF(h_(1F))_(1F) * h_(2F) (x)RF SF(h_(1F))_(2F) == 1 (x)RF SF(h)"), b)
    assert not ok
    assert len(witness["h"]) == 1


def test_false_identity_on_a_noncommutative_base():
    b = binding("pair_qz2")
    ok, witness = evaluate(parse("S(h) (x)R 1 == 1 (x)R S(h)"), b)
    assert not ok
    assert witness["lhs"] != witness["rhs"]


def test_coring_flip_needs_the_coarser_quotient():
    # in H (x)_R H the flipped side depends on the lift (groupoid) or is simply
    # false (pair algebroid over M2); modulo the flipped relators it holds
    flipped = "S(h)_(1) (x)RS S(h)_(2) == S(h_(2)) (x)RS S(h_(1))"
    naive = flipped.replace("(x)RS", "(x)R")
    B, A = instance("groupoid2")
    assert evaluate(parse(flipped), Binding(B, A, perturb=1))[0]
    with pytest.raises(IllDefined):
        evaluate(parse(naive), Binding(B, A, perturb=1))
    B, A = instance("pair_m2")
    assert evaluate(parse(flipped), Binding(B, A))[0]
    assert not evaluate(parse(naive), Binding(B, A))[0]


def test_unbound_free_variable_in_an_expression():
    b = binding("z2")
    with pytest.raises(UnboundGenerator):
        evaluate(parse("S(h)"), b)


def test_arity_mismatch():
    b = binding("z2")
    with pytest.raises(ArityError):
        evaluate(parse("h (x)R h == h"), b)


@given(st.integers(0, 3), st.integers(-3, 3).filter(bool))
def test_evaluation_is_linear_in_h(i, c):
    B, A = instance("groupoid2")
    node = parse("S(h_(1))_(1) * h_(2) (x)R S(h_(1))_(2) + h (x)R 1")
    v = {i: ONE, (i + 1) % 4: Q(c)}
    b1 = Binding(B, A, fixed={"h": v})
    b2 = Binding(B, A, fixed={"h": {k: 3 * x for k, x in v.items()}})
    ev = Evaluator(b1)
    assert equal(evaluate(node, b2), scale(evaluate(node, b1), Q(3)), ev)


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_verdicts_do_not_depend_on_lifts(seed):
    names = ["coassociativity", "antipode axiom", "cocycle identity", "twisted antipode axiom",
             "twisted coassociativity", "left lemma for the twisted antipode"]
    entries = [e for e in CORPUS if e.name in names]
    rep = run_corpus(entries, binding("groupoid2_s3", "diagonal transposition", seed))
    assert rep.ok, [(f.name, f.witness) for f in rep.failures]


def test_ill_defined_expression_is_caught_by_perturbation():
    # h_(1) alone in H (x)_R H is a lift, not a class; with a nonzero I_R the
    # expression h_(1) * h_(2) (product of the legs) depends on the lift
    B, A = instance("groupoid2")
    b = Binding(B, A, perturb=1)
    rep = run_corpus(parse_corpus("[legs multiplied]\nh_(1) * h_(2) == h"), b)
    assert rep.status("legs multiplied") == "fail"
    assert "ill-defined" in rep.failures[0].witness


def test_summation_order_does_not_matter():
    # reversing the stored term order of F leaves every verdict unchanged
    B, A = instance("z2xz2")
    c, _, _ = twisted("z2xz2", "factor pairing")
    rev = Cocycle.of(B, dict(reversed(list(c.F_lift.items()))),
                     dict(reversed(list(c.Fbar_lift.items()))))
    r1 = run_corpus(CORPUS, bind(B, A, c))
    r2 = run_corpus(CORPUS, bind(B, A, rev))
    assert [x.status for x in r1.checks] == [x.status for x in r2.checks]
