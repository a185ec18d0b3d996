import pytest

from hopftwist.mutation import _rebuild, first_failure, mutants, run_mutation_suite

from conftest import SMALL, instance


def expected_count(B, A):
    n, m = B.n, B.R.dim
    structure = n ** 3 + m ** 3 + 2 * n * m + m * n
    delta = n * B.ctx.Q2.dim
    return structure + delta + (n * n if A is not None else 0)


@pytest.mark.parametrize("name", SMALL)
def test_originals_pass_every_stage(name):
    B, A = instance(name)
    assert first_failure(B, A) is None


@pytest.mark.parametrize("name", ["trivial", "z2", "groupoid2", "pair_qz2"])
def test_every_mutant_is_detected(name):
    B, A = instance(name)
    res = run_mutation_suite(B, A)
    assert res.total == expected_count(B, A)
    assert res.survivors == []
    assert res.rate == 1.0


def test_mutants_change_exactly_one_entry():
    B, A = instance("groupoid2")
    for mu in mutants(B, A):
        if mu.family == "delta":
            diff = mu.instance.delta_lift.to_rows()
            orig = B.canonical_delta.to_rows()
            changed = [(i, j) for i in range(len(diff)) for j in range(B.n) if diff[i][j] != orig[i][j]]
            assert len(changed) == 1
        elif mu.family == "antipode":
            assert sum(mu.antipode.S[i, j] != A.S[i, j] for i in range(B.n) for j in range(B.n)) == 1


def test_sampling_is_deterministic_and_bounded():
    B, A = instance("z2xz2")
    a = [m.where for m in mutants(B, A, limit=5, seed=1)]
    b = [m.where for m in mutants(B, A, limit=5, seed=1)]
    assert a == b
    # seven slots (H, R, alpha, beta, eps, Delta, S), at most five each
    assert len(a) <= 35
    assert len(a) < expected_count(B, A)


def test_delta_mutant_names_a_coalgebra_check():
    B, A = instance("z2")
    canon = B.canonical_delta
    bad = _rebuild(B, delta=canon.with_entry(0, 0, canon[0, 0] + 1))
    hit = first_failure(bad, A)
    assert hit is not None and hit.startswith("bialgebroid")


def test_progress_callback_sees_every_mutant():
    B, A = instance("z2")
    seen = []
    res = run_mutation_suite(B, A, progress=lambda mu, hit: seen.append((mu.where, hit)))
    assert len(seen) == res.total
    assert all(hit is not None for _, hit in seen)
