"""Negative controls: single-entry corruptions of an instance and whether the checks notice.

Three mutant families, each changing exactly one number by +1:

* a structure constant of H or R, or an entry of alpha, beta or epsilon;
* a Delta-lift entry, taken on the canonical section of H (x)_R H so the
  change is never absorbed by I_R (an ambient entry can be, which would make
  the mutant equivalent to the original);
* an entry of S, with S^-1 recomputed when the corrupted S is still invertible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .algebra import Algebra, AlgebraMap
from .antipode import (AntipodePair, check_alpha_S_lemma, check_coring_antihom, check_delta_maps,
                       check_hopf)
from .bialgebroid import (BialgebroidInstance, check_action, check_bialgebroid, check_lemma_halphar,
                          check_structure)
from .linalg import ONE, Matrix
from .report import Report
from .rtensor import IllDefined, TensorContext


@dataclass(frozen=True)
class Mutant:
    family: str  # "structure", "delta", "antipode"
    where: str
    instance: BialgebroidInstance
    antipode: Optional[AntipodePair]


def _bump(M: Matrix, i: int, j: int) -> Matrix:
    return M.with_entry(i, j, M[i, j] + ONE)


def _bump_algebra(A: Algebra, i: int, j: int, k: int) -> Algebra:
    trip = [t for t in A.triples()]
    trip.append((i, j, k, ONE))
    return Algebra.from_triples(A.dim, trip, A.unit)


def _rebuild(B: BialgebroidInstance, H=None, R=None, alpha=None, beta=None, eps=None,
             delta=None) -> BialgebroidInstance:
    ctx = B.ctx
    if H is R is alpha is beta is None:
        # the tensor context (and its cached quotients) only depends on H, R, alpha, beta
        return BialgebroidInstance(ctx, delta or B.delta_lift, eps or B.epsilon, B.name)
    H = H or B.H
    R = R or B.R
    am = alpha or ctx.alpha.matrix
    bm = beta or ctx.beta.matrix
    new = TensorContext(H, R, AlgebraMap(R, H, am), AlgebraMap(R.opposite(), H, bm), check=False)
    return BialgebroidInstance(new, delta or B.delta_lift, eps or B.epsilon, B.name)


def _positions(total: int, limit: Optional[int], rng: random.Random) -> list:
    if limit is None or total <= limit:
        return list(range(total))
    return sorted(rng.sample(range(total), limit))


def mutants(B: BialgebroidInstance, A: Optional[AntipodePair], limit: Optional[int] = None,
            seed: int = 0) -> Iterator[Mutant]:
    """All single-entry mutants, or a deterministic sample of ``limit`` per slot."""
    rng = random.Random(seed)
    n, m = B.n, B.R.dim
    for label, Alg in (("H", B.H), ("R", B.R)):
        d = Alg.dim
        for p in _positions(d ** 3, limit, rng):
            i, j, k = p // (d * d), (p // d) % d, p % d
            new = _bump_algebra(Alg, i, j, k)
            kw = {"H": new} if label == "H" else {"R": new}
            yield Mutant("structure", f"{label} mu[{i}][{j}][{k}]", _rebuild(B, **kw), A)
    for label, M in (("alpha", B.ctx.alpha.matrix), ("beta", B.ctx.beta.matrix), ("eps", B.epsilon)):
        rows, cols = M.rows, M.cols
        for p in _positions(rows * cols, limit, rng):
            i, j = divmod(p, cols)
            yield Mutant("structure", f"{label}[{i}][{j}]", _rebuild(B, **{label: _bump(M, i, j)}), A)
    section = B.ctx.Q2.section
    canon = B.canonical_delta
    for p in _positions(n * len(section), limit, rng):
        h, s = divmod(p, len(section))
        yield Mutant("delta", f"Delta lift[{section[s]}][{h}]", _rebuild(B, delta=_bump(canon, section[s], h)), A)
    if A is None:
        return
    for p in _positions(n * n, limit, rng):
        i, j = divmod(p, n)
        S = _bump(A.S, i, j)
        try:
            pair = AntipodePair.from_matrix(S)
        except ValueError:
            pair = AntipodePair(S, A.S_inv)
        yield Mutant("antipode", f"S[{i}][{j}]", B, pair)


def _stages(B: BialgebroidInstance, A: Optional[AntipodePair]) -> list:
    """Check stages, cheapest first."""
    st: list = [
        ("H", lambda: B.H.check()),
        ("R", lambda: B.R.check()),
        ("structure", lambda: check_structure(B)),
        ("bialgebroid", lambda: check_bialgebroid(B, structure=False)),
        ("action", lambda: check_action(B)),
        ("lemma", lambda: check_lemma_halphar(B)),
    ]
    if A is not None:
        st += [
            ("hopf", lambda: check_hopf(B, A)),
            ("coring", lambda: check_coring_antihom(B, A)),
            ("alpha-S lemma", lambda: check_alpha_S_lemma(B, A)),
            ("delta maps", lambda: check_delta_maps(B, A)),
        ]
    return st


def first_failure(B: BialgebroidInstance, A: Optional[AntipodePair]) -> Optional[str]:
    """Name of the first failing check ("stage: check"), or None if everything passes."""
    for stage, run in _stages(B, A):
        try:
            rep: Report = run()
        except (IllDefined, ValueError, ArithmeticError) as exc:
            return f"{stage}: raised {type(exc).__name__}"
        if not rep.ok:
            return f"{stage}: {rep.failures[0].name}"
    return None


@dataclass
class MutationResult:
    total: int
    detected: int
    survivors: list
    by_check: dict

    @property
    def rate(self) -> float:
        return self.detected / self.total if self.total else 1.0


def run_mutation_suite(B: BialgebroidInstance, A: Optional[AntipodePair], limit: Optional[int] = None,
                       seed: int = 0, progress: Optional[Callable[[Mutant, Optional[str]], None]] = None
                       ) -> MutationResult:
    total = detected = 0
    survivors: list = []
    by_check: dict = {}
    for mu in mutants(B, A, limit, seed):
        total += 1
        hit = first_failure(mu.instance, mu.antipode)
        if progress is not None:
            progress(mu, hit)
        if hit is None:
            survivors.append(mu.where)
        else:
            detected += 1
            by_check[hit] = by_check.get(hit, 0) + 1
    return MutationResult(total, detected, survivors, by_check)
