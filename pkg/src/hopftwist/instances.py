"""Table-driven builders for group, groupoid and pair Hopf algebroids, plus bundled cocycles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .algebra import Algebra, AlgebraMap, group_algebra, matrix_algebra
from .antipode import AntipodePair, check_hopf
from .bialgebroid import BialgebroidInstance, check_bialgebroid
from .linalg import ONE, ZERO, Matrix, Q, axpy
from .rtensor import TensorContext, outer
from .twist import Cocycle


class InvalidTable(ValueError):
    pass


class NotAbelian(ValueError):
    pass


class NotBicharacter(ValueError):
    def __init__(self, pair, message="chi is not multiplicative"):
        super().__init__(f"{message}: {pair}")
        self.pair = pair


# -- tables ------------------------------------------------------------------


@dataclass(frozen=True)
class GroupTable:
    order: int
    product: tuple
    inverse: tuple
    identity: int = 0

    @classmethod
    def of(cls, product: Sequence[Sequence[int]], identity: int = 0) -> "GroupTable":
        n = len(product)
        inv = []
        for g in range(n):
            hits = [h for h in range(n) if product[g][h] == identity]
            if len(hits) != 1:
                raise InvalidTable(f"element {g} has no unique inverse")
            inv.append(hits[0])
        t = cls(n, tuple(tuple(r) for r in product), tuple(inv), identity)
        t.validate()
        return t

    def validate(self) -> None:
        n, p, e = self.order, self.product, self.identity
        if len(p) != n or any(len(r) != n for r in p):
            raise InvalidTable("product table is not square")
        if any(not 0 <= x < n for r in p for x in r):
            raise InvalidTable("product table entry out of range")
        for g in range(n):
            if p[e][g] != g or p[g][e] != g:
                raise InvalidTable(f"identity law fails at {g}")
            if p[g][self.inverse[g]] != e or p[self.inverse[g]][g] != e:
                raise InvalidTable(f"inverse law fails at {g}")
        for a, b, c in itertools.product(range(n), repeat=3):
            if p[p[a][b]][c] != p[a][p[b][c]]:
                raise InvalidTable(f"associativity fails at {(a, b, c)}")

    def is_abelian(self) -> bool:
        return all(self.product[a][b] == self.product[b][a]
                   for a in range(self.order) for b in range(a))


def cyclic_group(m: int) -> GroupTable:
    return GroupTable.of([[(a + b) % m for b in range(m)] for a in range(m)])


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    """(a, b) -> a*h.order + b."""
    m = h.order
    prod = [[g.product[a // m][c // m] * m + h.product[a % m][c % m]
             for c in range(g.order * m)] for a in range(g.order * m)]
    return GroupTable.of(prod, g.identity * m + h.identity)


def symmetric_group(k: int) -> GroupTable:
    """Permutations of range(k) in lexicographic order; (p*q)(i) = p(q(i))."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    prod = [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms]
    return GroupTable.of(prod, index[tuple(range(k))])


@dataclass(frozen=True)
class GroupoidTable:
    """Morphism f: source(f) -> target(f); ``product[f][g]`` is f∘g (defined iff source f = target g)."""

    objects: int
    morphisms: tuple  # (source, target)
    product: tuple  # None where undefined
    inverse: tuple

    def validate(self) -> None:
        n = len(self.morphisms)
        if len(self.product) != n or len(self.inverse) != n:
            raise InvalidTable("table sizes disagree")
        if any(not (0 <= s < self.objects and 0 <= t < self.objects) for s, t in self.morphisms):
            raise InvalidTable("object index out of range")
        for f, (sf, tf) in enumerate(self.morphisms):
            for g, (sg, tg) in enumerate(self.morphisms):
                fg = self.product[f][g]
                if (sf == tg) != (fg is not None):
                    raise InvalidTable(f"composition of {f} and {g} defined iff source/target match")
                if fg is not None and self.morphisms[fg] != (sg, tf):
                    raise InvalidTable(f"composite {f}∘{g} has wrong endpoints")
        ids = [self.identity(o) for o in range(self.objects)]
        for f, (s, t) in enumerate(self.morphisms):
            if self.product[ids[t]][f] != f or self.product[f][ids[s]] != f:
                raise InvalidTable(f"identity law fails at {f}")
            fi = self.inverse[f]
            if self.product[f][fi] != ids[t] or self.product[fi][f] != ids[s]:
                raise InvalidTable(f"inverse law fails at {f}")
        for f, g, h in itertools.product(range(n), repeat=3):
            fg, gh = self.product[f][g], self.product[g][h]
            if fg is not None and gh is not None:
                if self.product[fg][h] != self.product[f][gh]:
                    raise InvalidTable(f"associativity fails at {(f, g, h)}")

    def identity(self, o: int) -> int:
        for f, (s, t) in enumerate(self.morphisms):
            if s == t == o and all(self.product[f][g] == g for g, (_, tg) in enumerate(self.morphisms) if tg == o):
                return f
        raise InvalidTable(f"object {o} has no identity")

    @classmethod
    def of(cls, objects: int, morphisms, product, inverse=None) -> "GroupoidTable":
        morphisms = tuple(tuple(m) for m in morphisms)
        product = tuple(tuple(None if x is None else int(x) for x in row) for row in product)
        if inverse is None:
            inv = []
            for f, (s, t) in enumerate(morphisms):
                hits = [g for g, (sg, tg) in enumerate(morphisms)
                        if sg == t and tg == s and product[f][g] is not None
                        and morphisms[product[f][g]] == (t, t)
                        and all(product[product[f][g]][k] == k for k, (_, tk) in enumerate(morphisms) if tk == t)]
                if not hits:
                    raise InvalidTable(f"morphism {f} has no inverse")
                inv.append(hits[0])
            inverse = inv
        t = cls(objects, morphisms, product, tuple(inverse))
        t.validate()
        return t


def group_as_groupoid(g: GroupTable) -> GroupoidTable:
    return GroupoidTable.of(1, [(0, 0)] * g.order, g.product, g.inverse)


def pair_groupoid(m: int) -> GroupoidTable:
    """Indiscrete groupoid on m objects; the arrow j -> i has index i*m + j."""
    morph = [(j, i) for i in range(m) for j in range(m)]
    prod = [[(f // m) * m + (g % m) if f % m == g // m else None for g in range(m * m)]
            for f in range(m * m)]
    return GroupoidTable.of(m, morph, prod)


def groupoid_times_group(gt: GroupoidTable, g: GroupTable) -> GroupoidTable:
    """(f, a) -> f*g.order + a."""
    k = g.order
    morph = [gt.morphisms[f] for f in range(len(gt.morphisms)) for _ in range(k)]
    prod = []
    for x in range(len(morph)):
        row = []
        for y in range(len(morph)):
            fg = gt.product[x // k][y // k]
            row.append(None if fg is None else fg * k + g.product[x % k][y % k])
        prod.append(row)
    inv = [gt.inverse[x // k] * k + g.inverse[x % k] for x in range(len(morph))]
    return GroupoidTable.of(gt.objects, morph, prod, inv)


def disjoint_union(a: GroupoidTable, b: GroupoidTable) -> GroupoidTable:
    na = len(a.morphisms)
    morph = list(a.morphisms) + [(s + a.objects, t + a.objects) for s, t in b.morphisms]
    n = len(morph)
    prod = [[None] * n for _ in range(n)]
    for f in range(na):
        for g in range(na):
            prod[f][g] = a.product[f][g]
    for f in range(len(b.morphisms)):
        for g in range(len(b.morphisms)):
            x = b.product[f][g]
            prod[na + f][na + g] = None if x is None else na + x
    inv = list(a.inverse) + [na + x for x in b.inverse]
    return GroupoidTable.of(a.objects + b.objects, morph, prod, inv)


# -- builders ----------------------------------------------------------------


def _verify(B: BialgebroidInstance, A: Optional[AntipodePair]) -> None:
    rep = check_bialgebroid(B)
    if A is not None:
        rep.extend(check_hopf(B, A))
    if not rep.ok:
        f = rep.failures[0]
        raise InvalidTable(f"built instance fails {f.name}: {f.witness}")


def build_group_hopf(g: GroupTable, verify: bool = True, name: str = "") -> tuple:
    g.validate()
    n = g.order
    H = group_algebra(g.product, g.identity)
    R = Algebra.ground_field()
    unit = Matrix.from_columns(n, [H.unit_vec])
    ctx = TensorContext(H, R, AlgebraMap(R, H, unit), AlgebraMap(R.opposite(), H, unit))
    delta = Matrix.from_columns(n * n, [{x * n + x: ONE} for x in range(n)])
    eps = Matrix.from_rows([[1] * n])
    B = BialgebroidInstance(ctx, delta, eps, name or f"group algebra of order {n}")
    S = Matrix.from_columns(n, [{g.inverse[x]: ONE} for x in range(n)])
    A = AntipodePair(S, S)
    if verify:
        _verify(B, A)
    return B, A


def build_groupoid_algebroid(gt: GroupoidTable, verify: bool = True, name: str = "") -> tuple:
    gt.validate()
    n, m = len(gt.morphisms), gt.objects
    trip = [(f, g, gt.product[f][g], 1) for f in range(n) for g in range(n) if gt.product[f][g] is not None]
    ids = [gt.identity(o) for o in range(m)]
    unit = [1 if f in ids else 0 for f in range(n)]
    H = Algebra.from_triples(n, trip, unit)
    R = Algebra.from_triples(m, [(o, o, o, 1) for o in range(m)], [1] * m)
    src = Matrix.from_columns(n, [{ids[o]: ONE} for o in range(m)])
    ctx = TensorContext(H, R, AlgebraMap(R, H, src), AlgebraMap(R.opposite(), H, src))
    delta = Matrix.from_columns(n * n, [{f * n + f: ONE} for f in range(n)])
    eps = Matrix.from_columns(m, [{gt.morphisms[f][1]: ONE} for f in range(n)])
    B = BialgebroidInstance(ctx, delta, eps, name or f"groupoid algebra ({m} objects, {n} arrows)")
    S = Matrix.from_columns(n, [{gt.inverse[f]: ONE} for f in range(n)])
    A = AntipodePair(S, S)
    if verify:
        _verify(B, A)
    return B, A


def build_pair_algebroid(R: Algebra, verify: bool = True, name: str = "") -> tuple:
    """H = R (x) R^op with a (x) b at index a*m + b."""
    m = R.dim
    Rop = R.opposite()
    trip = []
    for a, b, c, d in itertools.product(range(m), repeat=4):
        for p, x in R.table[a][c].items():
            for q, y in Rop.table[b][d].items():
                trip.append((a * m + b, c * m + d, p * m + q, x * y))
    n = m * m
    unit_sp = R.unit_vec
    H_unit = [R.unit[i // m] * R.unit[i % m] for i in range(n)]
    H = Algebra.from_triples(n, trip, H_unit)
    alpha = Matrix.from_columns(n, [{r * m + k: u for k, u in unit_sp.items()} for r in range(m)])
    beta = Matrix.from_columns(n, [{k * m + r: u for k, u in unit_sp.items()} for r in range(m)])
    ctx = TensorContext(H, R, AlgebraMap(R, H, alpha), AlgebraMap(Rop, H, beta))
    cols = []
    for x in range(n):
        a, b = divmod(x, m)
        col: dict = {}
        for k, u in unit_sp.items():
            for l, v in unit_sp.items():
                axpy(col, {(a * m + k) * n + (l * m + b): ONE}, u * v)
        cols.append(col)
    delta = Matrix.from_columns(n * n, cols)
    eps = Matrix.from_columns(m, [R.multiply({x // m: ONE}, {x % m: ONE}) for x in range(n)])
    B = BialgebroidInstance(ctx, delta, eps, name or f"pair algebroid over a {m}-dim base")
    S = Matrix.from_columns(n, [{(x % m) * m + x // m: ONE} for x in range(n)])
    A = AntipodePair(S, S)
    if verify:
        _verify(B, A)
    return B, A


# -- cocycles ----------------------------------------------------------------


def _elementary_coordinates(g: GroupTable, generators: Optional[Sequence[int]] = None) -> tuple:
    """(generators, bits) with element x = prod of generators where bits[x] has a 1."""
    if not g.is_abelian():
        raise NotAbelian("group is not abelian")
    n, p, e = g.order, g.product, g.identity
    if any(p[x][x] != e for x in range(n)):
        raise ValueError("characters over Q need exponent 2")
    gens = list(generators) if generators is not None else []
    span = {e: 0}
    for k, x in enumerate(gens):
        new = {p[y][x]: b | (1 << k) for y, b in span.items()}
        if set(new) & set(span):
            raise ValueError("generators are not independent")
        span.update(new)
    for x in range(n):
        if x not in span:
            k = len(gens)
            gens.append(x)
            span.update({p[y][x]: b | (1 << k) for y, b in list(span.items())})
    return gens, [span[x] for x in range(n)]


def characters(g: GroupTable, generators: Optional[Sequence[int]] = None) -> list:
    """Characters of an elementary abelian 2-group; character a sends generator k to (-1)^(bit k of a)."""
    gens, bits = _elementary_coordinates(g, generators)
    return [[(-1) ** bin(a & bits[x]).count("1") for x in range(g.order)] for a in range(2 ** len(gens))]


def form_bicharacter(g: GroupTable, M: Sequence[Sequence[int]], generators=None) -> list:
    """chi(a, b) = (-1)^(a^T M b) on character labels."""
    gens, _ = _elementary_coordinates(g, generators)
    k = len(gens)
    if len(M) != k or any(len(r) != k for r in M):
        raise ValueError(f"form must be {k}x{k}")

    def bit(a, i):
        return (a >> i) & 1
    return [[(-1) ** (sum(bit(a, i) * M[i][j] * bit(b, j) for i in range(k) for j in range(k)) % 2)
             for b in range(2 ** k)] for a in range(2 ** k)]


def build_bicharacter_cocycle(B: BialgebroidInstance, g: GroupTable, chi, generators=None) -> Cocycle:
    """F = sum chi(a, b) P_a (x) P_b with P_a the idempotent of character a."""
    chars = characters(g, generators)
    N = len(chars)
    if len(chi) != N or any(len(r) != N for r in chi):
        raise ValueError(f"chi must be a {N}x{N} table")
    mult = [[chars.index([chars[a][x] * chars[b][x] for x in range(g.order)]) for b in range(N)]
            for a in range(N)]
    for a, b, c in itertools.product(range(N), repeat=3):
        if chi[mult[a][b]][c] != chi[a][c] * chi[b][c]:
            raise NotBicharacter((a, b, c), "not multiplicative in the first slot")
        if chi[a][mult[b][c]] != chi[a][b] * chi[a][c]:
            raise NotBicharacter((a, b, c), "not multiplicative in the second slot")
    n = g.order
    scale = Q(1) / (n * n)
    F: dict = {}
    for a in range(N):
        for b in range(N):
            if not chi[a][b]:
                continue
            for x in range(n):
                for y in range(n):
                    axpy(F, {x * n + y: ONE}, scale * chi[a][b] * chars[a][x] * chars[b][y])
    # chi takes values +-1, so F^-1 has coefficients chi^-1 = chi
    Fbar: dict = dict(F)
    return Cocycle.of(B, F, Fbar)


def pushforward_cocycle(B: BialgebroidInstance, J: Cocycle, images: Sequence[dict]) -> Cocycle:
    """Transport a cocycle along basis images: F = sum c images[i] (x) images[j].

    Meant for grouplike bisections (e.g. the diagonal copy of a vertex group);
    whether the result is a cocycle is left to ``check_cocycle``.
    """
    n = B.n

    def push(v):
        out: dict = {}
        for p, c in v.items():
            i, j = divmod(p, J.base.n)
            axpy(out, outer(images[i], images[j], n), c)
        return out
    Fbar = None if J.Fbar_lift is None else push(J.Fbar_lift)
    return Cocycle.of(B, push(J.F_lift), Fbar)


def diagonal_images(gt: GroupoidTable, g: GroupTable) -> list:
    """k -> sum over objects of (id_o, k) in the groupoid times a group."""
    k = g.order
    ids = [gt.identity(o) for o in range(gt.objects)]
    return [{i * k + a: ONE for i in ids} for a in range(k)]


# -- the bundled catalog ------------------------------------------------------


def sweedler_hopf() -> tuple:
    """Sweedler's 4-dimensional Hopf algebra, basis 1, g, x, gx."""
    # g^2 = 1, x^2 = 0, xg = -gx
    words = {(0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
             (1, 0): (1, 1), (1, 1): (0, 1), (1, 2): (3, 1), (1, 3): (2, 1),
             (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): None, (2, 3): None,
             (3, 0): (3, 1), (3, 1): (2, -1), (3, 2): None, (3, 3): None}
    trip = [(i, j, k, c) for (i, j), v in words.items() if v is not None for k, c in [v]]
    H = Algebra.from_triples(4, trip, [1, 0, 0, 0])
    R = Algebra.ground_field()
    unit = Matrix.from_columns(4, [H.unit_vec])
    ctx = TensorContext(H, R, AlgebraMap(R, H, unit), AlgebraMap(R.opposite(), H, unit))
    n = 4
    delta = Matrix.from_columns(16, [
        {0 * n + 0: ONE},
        {1 * n + 1: ONE},
        {2 * n + 0: ONE, 1 * n + 2: ONE},  # x -> x(x)1 + g(x)x
        {3 * n + 1: ONE, 0 * n + 3: ONE},  # gx -> gx(x)g + 1(x)gx
    ])
    eps = Matrix.from_rows([[1, 1, 0, 0]])
    B = BialgebroidInstance(ctx, delta, eps, "Sweedler's Hopf algebra")
    # S(g) = g, S(x) = -gx, S(gx) = S(x)S(g) = -gxg = x
    S = Matrix.from_columns(4, [{0: ONE}, {1: ONE}, {3: -ONE}, {2: ONE}])
    A = AntipodePair.from_matrix(S)
    return B, A


def sweedler_twist(B: BialgebroidInstance, t) -> Cocycle:
    """F_t = 1 (x) 1 + (t/2) gx (x) x, with inverse 1 (x) 1 - (t/2) gx (x) x."""
    t = Q(t)
    F = {0: ONE, 3 * 4 + 2: t / 2}
    Fbar = {0: ONE, 3 * 4 + 2: -t / 2}
    return Cocycle.of(B, F, {k: v for k, v in Fbar.items() if v})


Z2 = cyclic_group(2)
Z2xZ2 = direct_product(Z2, Z2)


def catalog() -> dict:
    """name -> zero-argument builder returning (instance, antipode)."""
    return {
        "trivial": lambda: build_group_hopf(GroupTable.of([[0]]), name="trivial group"),
        "z2": lambda: build_group_hopf(Z2, name="Q[Z2]"),
        "z2xz2": lambda: build_group_hopf(Z2xZ2, name="Q[Z2xZ2]"),
        "sweedler": sweedler_hopf,
        "groupoid2": lambda: build_groupoid_algebroid(pair_groupoid(2), name="pair groupoid on 2 objects"),
        "z2_union_z2": lambda: build_groupoid_algebroid(
            disjoint_union(group_as_groupoid(Z2), group_as_groupoid(Z2)), name="Z2 disjoint union Z2"),
        "groupoid2_s3": lambda: build_groupoid_algebroid(
            groupoid_times_group(pair_groupoid(2), symmetric_group(3)), name="pair groupoid on 2 objects times S3"),
        "pair_qz2": lambda: build_pair_algebroid(group_algebra(Z2.product), name="pair algebroid over Q[Z2]"),
        "pair_m2": lambda: build_pair_algebroid(matrix_algebra(2), name="pair algebroid over M2(Q)"),
    }


def bundled_cocycles(name: str, B: BialgebroidInstance) -> dict:
    """Nontrivial cocycles shipped with an instance (the identity is always available separately)."""
    out = {}
    if name == "z2":
        out["self-pairing"] = build_bicharacter_cocycle(B, Z2, form_bicharacter(Z2, [[1]]))
    elif name == "z2xz2":
        # generators g1 = (1,0) -> index 2, g2 = (0,1) -> index 1
        out["factor pairing"] = build_bicharacter_cocycle(
            B, Z2xZ2, form_bicharacter(Z2xZ2, [[0, 0], [1, 0]], generators=[2, 1]), generators=[2, 1])
    elif name == "sweedler":
        out["t=1"] = sweedler_twist(B, 1)
    elif name == "z2_union_z2":
        J = build_bicharacter_cocycle(build_group_hopf(Z2, verify=False)[0], Z2, form_bicharacter(Z2, [[1]]))
        # grouplike bisection: 1 -> 1_H, g -> g on the first component, identity on the second
        out["first component self-pairing"] = pushforward_cocycle(B, J, [{0: ONE, 2: ONE}, {1: ONE, 2: ONE}])
    elif name == "groupoid2_s3":
        S3 = symmetric_group(3)
        Jb, _ = build_group_hopf(Z2, verify=False)
        J = build_bicharacter_cocycle(Jb, Z2, form_bicharacter(Z2, [[1]]))
        diag = diagonal_images(pair_groupoid(2), S3)
        transposition = 1  # (0 2 1) in lexicographic order is a transposition
        out["diagonal transposition"] = pushforward_cocycle(B, J, [diag[S3.identity], diag[transposition]])
    return out
