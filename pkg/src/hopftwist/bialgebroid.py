"""Left bialgebroids: the bundle (H, R, alpha, beta, Delta, eps) and its axioms."""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Optional

from .algebra import Algebra, AlgebraMap, check_algebra_map
from .linalg import ONE, Matrix, SparseVec, axpy, dense, vadd, vcanon
from .report import Report
from .rtensor import CommutationFailure, TensorContext, outer, outer3


class BialgebroidInstance:
    """A candidate left bialgebroid.

    ``delta`` is an (n^2 x n) matrix whose column h is a lift of Delta(h) to
    H (x)_k H; ``epsilon`` is the (dim R x n) matrix of the counit.  Nothing is
    verified on construction apart from shapes; see ``check_bialgebroid``.
    """

    def __init__(self, ctx: TensorContext, delta: Matrix, epsilon: Matrix, name: str = ""):
        n = ctx.n
        if (delta.rows, delta.cols) != (n * n, n):
            raise ValueError(f"Delta lift must be {n * n}x{n}")
        if (epsilon.rows, epsilon.cols) != (ctx.R.dim, n):
            raise ValueError(f"epsilon must be {ctx.R.dim}x{n}")
        self.ctx = ctx
        self.delta_lift = delta
        self.epsilon = epsilon
        self.name = name

    @property
    def H(self) -> Algebra:
        return self.ctx.H

    @property
    def R(self) -> Algebra:
        return self.ctx.R

    @property
    def n(self) -> int:
        return self.ctx.n

    def alpha(self, r: Mapping) -> SparseVec:
        return self.ctx.alpha(r)

    def beta(self, r: Mapping) -> SparseVec:
        return self.ctx.beta(r)

    def eps(self, h: Mapping) -> SparseVec:
        return self.epsilon.apply(h)

    @cached_property
    def _delta_cols(self) -> tuple:
        q = self.ctx.Q2
        return tuple(q.reduce(c) for c in self.delta_lift.sparse_columns)

    def delta_basis(self, i: int) -> SparseVec:
        """Canonical lift of Delta(e_i)."""
        return self._delta_cols[i]

    def delta(self, h: Mapping) -> SparseVec:
        out: dict = {}
        cols = self._delta_cols
        for i, c in h.items():
            axpy(out, cols[i], c)
        return out

    @cached_property
    def canonical_delta(self) -> Matrix:
        return Matrix.from_columns(self.n * self.n, list(self._delta_cols))

    def act(self, h: Mapping, r: Mapping) -> SparseVec:
        """h |> r = eps(h alpha(r))"""
        return self.eps(self.H.multiply(h, self.alpha(r)))

    def left_act2(self, m: Mapping, t: Mapping) -> SparseVec:
        """Factorwise m * t, reduced in H (x)_R H."""
        return self.ctx.reduce2(self.ctx.mul2(m, t))

    def with_delta(self, delta: Matrix) -> "BialgebroidInstance":
        return BialgebroidInstance(self.ctx, delta, self.epsilon, self.name)


def _e(i: int) -> dict:
    return {i: ONE}


def check_structure(B: BialgebroidInstance) -> Report:
    """Algebra axioms for H and R, algebra-map property of alpha/beta, commuting images."""
    rep = Report("structure")
    ctx = B.ctx
    for label, A in (("H", B.H), ("R", B.R)):
        sub = A.check()
        rep.extend(sub, prefix=f"{label} ")
    for label, f in (("alpha", AlgebraMap(B.R, B.H, ctx.alpha.matrix)),
                     ("beta", AlgebraMap(B.R.opposite(), B.H, ctx.beta.matrix))):
        sub = check_algebra_map(f)
        rep.extend(sub, prefix=f"{label} ")
    with rep.timed("images commute") as h:
        H = B.H
        for r in range(B.R.dim):
            a = ctx.alpha.image(r)
            for s in range(B.R.dim):
                b = ctx.beta.image(s)
                if vcanon(H.multiply(a, b)) != vcanon(H.multiply(b, a)):
                    h[0], h[1] = False, {"r": r, "s": s}
                    break
            if not h[0]:
                break
    return rep


def check_bialgebroid(B: BialgebroidInstance, structure: bool = True) -> Report:
    rep = Report(f"bialgebroid {B.name}".strip())
    if structure:
        st = check_structure(B)
        rep.extend(st)
        if not st.get("images commute").ok:
            rep.skip("axioms", "images of alpha and beta do not commute")
            return rep
    ctx, H, R, n = B.ctx, B.H, B.R, B.n
    red2, red3 = ctx.reduce2, ctx.reduce3
    one = H.unit_vec
    cols = [B.delta_basis(i) for i in range(n)]

    with rep.timed("(a) Delta is an R-bimodule map") as w:
        for a in range(R.dim):
            for b in range(R.dim):
                ab = outer(ctx.alpha.image(a), ctx.beta.image(b), n)
                m = H.multiply(ctx.alpha.image(a), ctx.beta.image(b))
                for h in range(n):
                    lhs = B.delta(H.multiply(m, _e(h)))
                    rhs = red2(ctx.mul2(ab, cols[h]))
                    if vcanon(lhs) != vcanon(rhs):
                        w[0], w[1] = False, {"a": a, "b": b, "h": h}
                        break
                if not w[0]:
                    break
            if not w[0]:
                break

    with rep.timed("(b) coassociativity") as w:
        for h in range(n):
            left: dict = {}
            right: dict = {}
            for i, j, c in ctx.legs2(cols[h]):
                for p, d in cols[i].items():
                    axpy(left, {p * n + j: ONE}, c * d)
                for p, d in cols[j].items():
                    axpy(right, {i * n * n + p: ONE}, c * d)
            if vcanon(red3(left)) != vcanon(red3(right)):
                w[0], w[1] = False, {"h": h}
                break

    with rep.timed("(c) counit") as w:
        for h in range(n):
            lhs1: dict = {}
            lhs2: dict = {}
            for i, j, c in ctx.legs2(cols[h]):
                axpy(lhs1, H.multiply(B.alpha(B.eps(_e(i))), _e(j)), c)
                axpy(lhs2, H.multiply(B.beta(B.eps(_e(j))), _e(i)), c)
            if vcanon(lhs1) != vcanon(_e(h)):
                w[0], w[1] = False, {"h": h, "side": "alpha(eps(h1))h2"}
                break
            if vcanon(lhs2) != vcanon(_e(h)):
                w[0], w[1] = False, {"h": h, "side": "beta(eps(h2))h1"}
                break

    with rep.timed("(d) counit is R-bilinear") as w:
        for r in range(R.dim):
            er = _e(r)
            if vcanon(B.eps(ctx.alpha.image(r))) != vcanon(er):
                w[0], w[1] = False, {"r": r, "identity": "eps(alpha(r)) = r"}
                break
            if vcanon(B.eps(ctx.beta.image(r))) != vcanon(er):
                w[0], w[1] = False, {"r": r, "identity": "eps(beta(r)) = r"}
                break
            for h in range(n):
                eh = B.eps(_e(h))
                if vcanon(B.eps(H.multiply(ctx.alpha.image(r), _e(h)))) != vcanon(R.multiply(er, eh)):
                    w[0], w[1] = False, {"r": r, "h": h, "identity": "eps(alpha(r)h) = r eps(h)"}
                    break
                if vcanon(B.eps(H.multiply(ctx.beta.image(r), _e(h)))) != vcanon(R.multiply(eh, er)):
                    w[0], w[1] = False, {"r": r, "h": h, "identity": "eps(beta(r)h) = eps(h) r"}
                    break
            if not w[0]:
                break

    with rep.timed("(e) eps(gh) = eps(g alpha(eps(h)))") as w:
        for h in range(n):
            aeh = B.alpha(B.eps(_e(h)))
            for g in range(n):
                if vcanon(B.eps(H.table[g][h])) != vcanon(B.eps(H.multiply(_e(g), aeh))):
                    w[0], w[1] = False, {"g": g, "h": h}
                    break
            if not w[0]:
                break

    with rep.timed("(f) Takeuchi: Delta(h) I_R in I_R") as w:
        rel = ctx.relators2
        I = ctx.I_R
        for h in range(n):
            for idx, k in enumerate(rel):
                if not I.contains(ctx.mul2(cols[h], k)):
                    w[0], w[1] = False, {"h": h, "relator": idx}
                    break
            if not w[0]:
                break

    with rep.timed("(g) induced map is a unital action") as w:
        if vcanon(B.delta(one)) != vcanon(red2(ctx.one2())):
            w[0], w[1] = False, {"identity": "Delta(1) = 1 (x) 1"}
        else:
            for g in range(n):
                for h in range(n):
                    lhs = B.delta(H.table[g][h])
                    rhs = red2(ctx.mul2(cols[g], cols[h]))
                    if vcanon(lhs) != vcanon(rhs):
                        w[0], w[1] = False, {"g": g, "h": h}
                        break
                if not w[0]:
                    break
    return rep


def action(B: BialgebroidInstance, h, r) -> list:
    """Dense front end of h |> r."""
    from .linalg import sparse
    if len(h) != B.n or len(r) != B.R.dim:
        raise ValueError("dimension mismatch")
    return dense(B.act(sparse(h), sparse(r)), B.R.dim)


def check_action(B: BialgebroidInstance) -> Report:
    """(gh)|>r = g|>(h|>r), 1|>r = r, (alpha(a)beta(b)h)|>r = a (h|>r) b."""
    rep = Report("action")
    H, R, n = B.H, B.R, B.n
    with rep.timed("unital action") as w:
        for r in range(R.dim):
            if vcanon(B.act(H.unit_vec, _e(r))) != vcanon(_e(r)):
                w[0], w[1] = False, {"r": r}
                break
    with rep.timed("action is associative") as w:
        for g in range(n):
            for h in range(n):
                gh = H.table[g][h]
                for r in range(R.dim):
                    if vcanon(B.act(gh, _e(r))) != vcanon(B.act(_e(g), B.act(_e(h), _e(r)))):
                        w[0], w[1] = False, {"g": g, "h": h, "r": r}
                        break
                if not w[0]:
                    break
            if not w[0]:
                break
    with rep.timed("action is R-bilinear") as w:
        for a in range(R.dim):
            for b in range(R.dim):
                m = H.multiply(B.ctx.alpha.image(a), B.ctx.beta.image(b))
                for h in range(n):
                    mh = H.multiply(m, _e(h))
                    for r in range(R.dim):
                        lhs = B.act(mh, _e(r))
                        rhs = R.product(_e(a), B.act(_e(h), _e(r)), _e(b))
                        if vcanon(lhs) != vcanon(rhs):
                            w[0], w[1] = False, {"a": a, "b": b, "h": h, "r": r}
                            break
                    if not w[0]:
                        break
                if not w[0]:
                    break
            if not w[0]:
                break
    return rep


def check_lemma_halphar(B: BialgebroidInstance) -> Report:
    """h alpha(r) = alpha(h1 |> r) h2  and  h beta(r) = beta(h2 |> r) h1."""
    rep = Report("source/target commutation lemma")
    H, R, n, ctx = B.H, B.R, B.n, B.ctx
    with rep.timed("h alpha(r) = alpha(h1|>r) h2") as w:
        for h in range(n):
            col = B.delta_basis(h)
            for r in range(R.dim):
                rhs: dict = {}
                for i, j, c in ctx.legs2(col):
                    axpy(rhs, H.multiply(B.alpha(B.act(_e(i), _e(r))), _e(j)), c)
                if vcanon(H.multiply(_e(h), ctx.alpha.image(r))) != vcanon(rhs):
                    w[0], w[1] = False, {"h": h, "r": r}
                    break
            if not w[0]:
                break
    with rep.timed("h beta(r) = beta(h2|>r) h1") as w:
        for h in range(n):
            col = B.delta_basis(h)
            for r in range(R.dim):
                rhs = {}
                for i, j, c in ctx.legs2(col):
                    axpy(rhs, H.multiply(B.beta(B.act(_e(j), _e(r))), _e(i)), c)
                if vcanon(H.multiply(_e(h), ctx.beta.image(r))) != vcanon(rhs):
                    w[0], w[1] = False, {"h": h, "r": r}
                    break
            if not w[0]:
                break
    return rep
