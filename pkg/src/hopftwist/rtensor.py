"""Tensor square and cube of H over a (possibly noncommutative) base R.

H (x)_R H is realised as the quotient of H (x) H by the span I_R of the
relators  beta(r)x (x) y - x (x) alpha(r)y  (r, x, y running over bases), and
the cube as the quotient of H^(x)3 by the relators in legs (1,2) and (2,3).
Basis index conventions: e_i (x) e_j -> i*n + j, e_i (x) e_j (x) e_k -> (i*n + j)*n + k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional

from .algebra import Algebra, AlgebraMap, check_algebra_map
from .linalg import ONE, QuotientSpace, SparseVec, Subspace, axpy, vadd, vcanon
from .report import Report


class CommutationFailure(ValueError):
    def __init__(self, r: int, s: int):
        super().__init__(f"alpha({r}) and beta({s}) do not commute")
        self.r, self.s = r, s


class StructureError(ValueError):
    """A structure map fails to be an algebra map (or similar structural defect)."""


class IllDefined(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ArityError(ValueError):
    pass


def outer(x: Mapping, y: Mapping, n: int) -> SparseVec:
    """x (x) y in H (x) H."""
    return {i * n + j: a * b for i, a in x.items() for j, b in y.items()}


def outer3(x: Mapping, y: Mapping, z: Mapping, n: int) -> SparseVec:
    return {(i * n + j) * n + k: a * b * c for i, a in x.items() for j, b in y.items()
            for k, c in z.items()}


class TensorContext:
    """The data (H, R, alpha, beta) together with I_R, the cube kernel and their quotients."""

    def __init__(self, H: Algebra, R: Algebra, alpha: AlgebraMap, beta: AlgebraMap,
                 check: bool = True):
        self.H, self.R, self.alpha, self.beta = H, R, alpha, beta
        self.n = H.dim
        if check:
            self._check_maps()
        self._opposite: Optional[TensorContext] = None

    def _check_maps(self) -> None:
        H, R = self.H, self.R
        if self.alpha.target is not H or self.beta.target is not H:
            raise StructureError("alpha and beta must land in H")
        if self.alpha.source.dim != R.dim or self.beta.source.dim != R.dim:
            raise StructureError("alpha and beta must be defined on R")
        rep = check_algebra_map(AlgebraMap(R, H, self.alpha.matrix))
        if not rep.ok:
            raise StructureError(f"alpha is not an algebra map: {rep.failures[0].name} {rep.failures[0].witness}")
        rep = check_algebra_map(AlgebraMap(R.opposite(), H, self.beta.matrix))
        if not rep.ok:
            raise StructureError(f"beta is not an algebra map from R^op: {rep.failures[0].name} {rep.failures[0].witness}")
        for r in range(R.dim):
            a = self.alpha.image(r)
            for s in range(R.dim):
                b = self.beta.image(s)
                if vcanon(H.multiply(a, b)) != vcanon(H.multiply(b, a)):
                    raise CommutationFailure(r, s)

    # -- kernels ------------------------------------------------------------

    def relator2(self, r: int, x: int, y: int) -> SparseVec:
        """beta(r) e_x (x) e_y - e_x (x) alpha(r) e_y"""
        H, n = self.H, self.n
        left = outer(H.multiply(self.beta.image(r), {x: ONE}), {y: ONE}, n)
        right = outer({x: ONE}, H.multiply(self.alpha.image(r), {y: ONE}), n)
        return vadd(left, right, -ONE)

    @cached_property
    def relators2(self) -> tuple:
        """Full spanning set of I_R, indexed (r, x, y) in lexicographic order."""
        n = self.n
        return tuple(self.relator2(r, x, y) for r in range(self.R.dim)
                     for x in range(n) for y in range(n))

    @cached_property
    def I_R(self) -> Subspace:
        return Subspace.span(self.n ** 2, self.relators2)

    @cached_property
    def I_alpha(self) -> Subspace:
        """span{x alpha(r) (x) y - x (x) alpha(r) y}: the kernel for H_alpha (x)_R H."""
        H, n = self.H, self.n
        gens = []
        for r in range(self.R.dim):
            al = self.alpha.image(r)
            for x in range(n):
                xa = H.multiply({x: ONE}, al)
                for y in range(n):
                    gens.append(vadd(outer(xa, {y: ONE}, n), outer({x: ONE}, H.multiply(al, {y: ONE}), n), -ONE))
        return Subspace.span(n * n, gens)

    @cached_property
    def Q2(self) -> QuotientSpace:
        return QuotientSpace.of(self.I_R)

    def relators3(self) -> Iterable:
        """Spanning relators of the cube kernel: ((leg, r, x, y, z), vector)."""
        H, n = self.H, self.n
        for r in range(self.R.dim):
            al, be = self.alpha.image(r), self.beta.image(r)
            for x in range(n):
                ex = {x: ONE}
                bx = H.multiply(be, ex)
                for y in range(n):
                    ey = {y: ONE}
                    ay = H.multiply(al, ey)
                    by = H.multiply(be, ey)
                    for z in range(n):
                        ez = {z: ONE}
                        v = vadd(outer3(bx, ey, ez, n), outer3(ex, ay, ez, n), -ONE)
                        yield (12, r, x, y, z), v
                        az = H.multiply(al, ez)
                        v = vadd(outer3(ex, by, ez, n), outer3(ex, ey, az, n), -ONE)
                        yield (23, r, x, y, z), v

    @cached_property
    def I3(self) -> Subspace:
        # I_R (x) H + H (x) I_R has the same span as the two relator families
        n = self.n
        n2 = n * n
        gens = []
        for row in self.I_R.rows:
            for k in range(n):
                gens.append({p * n + k: c for p, c in row.items()})
        for k in range(n):
            for row in self.I_R.rows:
                gens.append({k * n2 + p: c for p, c in row.items()})
        return Subspace.span(n ** 3, gens)

    @cached_property
    def Q3(self) -> QuotientSpace:
        return QuotientSpace.of(self.I3)

    # -- products -------------------------------------------------------------

    def mul2(self, a: Mapping, b: Mapping) -> SparseVec:
        """Factorwise product in H (x)_k H."""
        n, t = self.n, self.H.table
        out: dict = {}
        for p, c in a.items():
            i, j = divmod(p, n)
            ti, tj = t[i], t[j]
            for q, d in b.items():
                k, l = divmod(q, n)
                x, y = ti[k], tj[l]
                if not x or not y:
                    continue
                cd = c * d
                for u, xu in x.items():
                    base = u * n
                    for v, yv in y.items():
                        idx = base + v
                        val = out.get(idx, 0) + cd * xu * yv
                        if val:
                            out[idx] = val
                        else:
                            out.pop(idx, None)
        return out

    def mul3(self, a: Mapping, b: Mapping) -> SparseVec:
        n, t = self.n, self.H.table
        out: dict = {}
        for p, c in a.items():
            ij, k = divmod(p, n)
            i, j = divmod(ij, n)
            for q, d in b.items():
                uv, w = divmod(q, n)
                u, v = divmod(uv, n)
                x, y, z = t[i][u], t[j][v], t[k][w]
                if not x or not y or not z:
                    continue
                cd = c * d
                for a1, xa in x.items():
                    for b1, yb in y.items():
                        base = (a1 * n + b1) * n
                        cxy = cd * xa * yb
                        for c1, zc in z.items():
                            idx = base + c1
                            val = out.get(idx, 0) + cxy * zc
                            if val:
                                out[idx] = val
                            else:
                                out.pop(idx, None)
        return out

    def legs2(self, v: Mapping) -> Iterable:
        n = self.n
        for p, c in v.items():
            i, j = divmod(p, n)
            yield i, j, c

    def legs3(self, v: Mapping) -> Iterable:
        n = self.n
        for p, c in v.items():
            ij, k = divmod(p, n)
            i, j = divmod(ij, n)
            yield i, j, k, c

    def one2(self) -> SparseVec:
        u = self.H.unit_vec
        return outer(u, u, self.n)

    def one3(self) -> SparseVec:
        u = self.H.unit_vec
        return outer3(u, u, u, self.n)

    def reduce2(self, v: Mapping) -> SparseVec:
        return self.Q2.reduce(v)

    def reduce3(self, v: Mapping) -> SparseVec:
        return self.Q3.reduce(v)

    def in_I_R(self, v: Mapping) -> bool:
        return self.I_R.contains(v)

    def coset2(self, v: Mapping) -> "TensorCoset":
        return TensorCoset(self, 2, self.reduce2(v))

    def coset3(self, v: Mapping) -> "TensorCoset":
        return TensorCoset(self, 3, self.reduce3(v))

    # -- opposite -------------------------------------------------------------

    def opposite(self) -> "TensorContext":
        """Context receiving the flip x (x) y -> y (x) x.

        The flipped kernel is spanned by alpha(r)y (x) x - y (x) beta(r)x, i.e.
        it is the kernel of the context with base R^op, source beta and
        target alpha (and the same algebra H).
        """
        if self._opposite is None:
            Rop = self.R.opposite()
            op = TensorContext(self.H, Rop, AlgebraMap(Rop, self.H, self.beta.matrix),
                               AlgebraMap(self.R, self.H, self.alpha.matrix), check=False)
            op._opposite = self
            self._opposite = op
        return self._opposite


def build_context(H: Algebra, R: Algebra, alpha: AlgebraMap, beta: AlgebraMap) -> TensorContext:
    return TensorContext(H, R, alpha, beta)


@dataclass(frozen=True, eq=False)
class TensorCoset:
    context: TensorContext
    arity: int
    lift: dict

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorCoset):
            return NotImplemented
        return (self.context is other.context and self.arity == other.arity
                and vcanon(self.lift) == vcanon(other.lift))

    def __hash__(self):
        return hash((id(self.context), self.arity, vcanon(self.lift)))

    def __add__(self, other: "TensorCoset") -> "TensorCoset":
        if other.context is not self.context or other.arity != self.arity:
            raise ArityError("cannot add cosets from different tensor spaces")
        return _make(self.context, self.arity, vadd(self.lift, other.lift))

    def is_zero(self) -> bool:
        return not self.lift


def _make(ctx: TensorContext, arity: int, v: Mapping) -> TensorCoset:
    return ctx.coset2(v) if arity == 2 else ctx.coset3(v)


def stabilizes_kernel(ctx: TensorContext, m: Mapping, kernel_vectors=None):
    """Return None if m * k lies in I_R for every spanning k, else a witness index."""
    vecs = ctx.I_R.rows if kernel_vectors is None else kernel_vectors
    for idx, k in enumerate(vecs):
        if not ctx.I_R.contains(ctx.mul2(m, k)):
            return idx
    return None


def factorwise_left_multiply(t: TensorCoset, m: Mapping, check: bool = True) -> TensorCoset:
    """Class of m * lift(t) for a multiplier m with m*I_R inside I_R."""
    ctx = t.context
    if t.arity != 2:
        raise ArityError("factorwise_left_multiply works on H (x)_R H")
    if check:
        bad = stabilizes_kernel(ctx, m)
        if bad is not None:
            k = ctx.I_R.rows[bad]
            raise IllDefined("multiplier does not preserve I_R",
                             {"kernel_vector": sorted(k.items()),
                              "product": sorted(ctx.mul2(m, k).items())})
    return ctx.coset2(ctx.mul2(m, t.lift))


def check_lift_independence(expr: Callable[[dict], Mapping], t: TensorCoset,
                            kernel_vectors=None, reduce: Optional[Callable] = None,
                            name: str = "lift independence") -> Report:
    """Evaluate expr on the canonical lift and on lift + k for every spanning k.

    ``expr`` maps a lift to a vector; results are compared after ``reduce``
    (default: identity, i.e. expr is expected to return canonical forms).
    """
    ctx = t.context
    if kernel_vectors is None:
        kernel_vectors = ctx.relators2 if t.arity == 2 else [v for _, v in ctx.relators3()]
    red = reduce or (lambda v: v)
    rep = Report(name)
    with rep.timed(name) as h:
        base = vcanon(red(expr(dict(t.lift))))
        for idx, k in enumerate(kernel_vectors):
            got = vcanon(red(expr(vadd(t.lift, k))))
            if got != base:
                h[0], h[1] = False, {"perturbation": idx, "kernel_vector": sorted(k.items())}
                break
    return rep


def flip_lift(v: Mapping, n: int) -> SparseVec:
    out = {}
    for p, c in v.items():
        i, j = divmod(p, n)
        out[j * n + i] = c
    return out


def flip_to_opposite(t: TensorCoset) -> TensorCoset:
    if t.arity != 2:
        raise ArityError("flip is defined on the tensor square")
    ctx = t.context
    op = ctx.opposite()
    return op.coset2(flip_lift(t.lift, ctx.n))
