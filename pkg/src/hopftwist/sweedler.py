"""A small language for Sweedler-notation identities.

Example::

    S(h_(1))_(1) * h_(2) (x)R S(h_(1))_(2) == 1 (x)R S(h)

Each top-level summand is its own summation scope.  Inside it, ``F1``/``F2``
(and primed copies ``F1'``/``F2'``) run over the terms of the stored lift of
F, ``Fbar1``/``Fbar2`` over the lift of its inverse, and ``X_(1)``/``X_(2)``
over the terms of the canonical lift of Delta(X) (``_(1F)``/``_(2F)`` for the
twisted coproduct).  The result is reduced in H (x)_R H or H (x)_RF H
according to the separator; ``(x)RS`` compares modulo I_R plus the image of
I_R under x (x) y -> S y (x) S x, the coarsest quotient on which flipping
through S is well defined.  Free variables h, g (basis of H) and a, b, r, s
(basis of R) are iterated exhaustively when checking an equality.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional

from .antipode import AntipodePair, flip_S
from .bialgebroid import BialgebroidInstance
from .linalg import ONE, QuotientSpace, Subspace, ZERO, Q, Scalar, SparseVec, axpy, vadd, vcanon, vscale
from .report import FAIL, PASS, SKIPPED, Report
from .rtensor import ArityError, IllDefined
from .twist import Cocycle, TwistedStructure, compute_VF


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        super().__init__(f"{line}:{col}: {message}" + (f" (expected {expected})" if expected else ""))
        self.line, self.col, self.expected = line, col, expected


class UnboundGenerator(ValueError):
    pass


class ArityMismatch(ArityError):
    pass


H_VARS = ("h", "g")
R_VARS = ("a", "b", "r", "s")
FAMILY_GENS = ("F1", "F2", "Fbar1", "Fbar2")
CONST_GENS = ("V", "Vinv")
MAPS = ("S", "Sinv", "SF", "SFinv", "alpha", "beta", "alphaF", "betaF", "eps")


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Scalar


@dataclass(frozen=True)
class Gen:
    name: str
    prime: int = 0


@dataclass(frozen=True)
class Map:
    name: str
    arg: object


@dataclass(frozen=True)
class Split:
    arg: object
    leg: int
    twisted: bool = False


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Act:
    left: object
    right: object


@dataclass(frozen=True)
class Tensor:
    legs: tuple
    tag: str  # "R" or "RF"


@dataclass(frozen=True)
class Sum:
    terms: tuple  # (sign, node)


@dataclass(frozen=True)
class Identity:
    lhs: object
    rhs: object


_LEVEL = {Sum: 0, Tensor: 1, Act: 2, Prod: 3}


def _level(node) -> int:
    return _LEVEL.get(type(node), 4)


def to_text(node) -> str:
    """Canonical print; ``parse(to_text(x)) == x``."""
    def wrap(child, need):
        s = to_text(child)
        return f"({s})" if _level(child) < need else s

    if isinstance(node, Identity):
        return f"{to_text(node.lhs)} == {to_text(node.rhs)}"
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Gen):
        return node.name + "'" * node.prime
    if isinstance(node, Map):
        return f"{node.name}({to_text(node.arg)})"
    if isinstance(node, Split):
        return f"{wrap(node.arg, 4)}_({node.leg}{'F' if node.twisted else ''})"
    if isinstance(node, Prod):
        return " * ".join(wrap(f, 4) for f in node.factors)
    if isinstance(node, Act):
        return f"{wrap(node.left, 3)} |> {wrap(node.right, 2)}"
    if isinstance(node, Tensor):
        return f" (x){node.tag} ".join(wrap(l, 2) for l in node.legs)
    if isinstance(node, Sum):
        out = []
        for k, (sign, t) in enumerate(node.terms):
            s = wrap(t, 1)
            if k == 0:
                out.append(s if sign > 0 else f"- {s}")
            else:
                out.append(f"{'+' if sign > 0 else '-'} {s}")
        return " ".join(out)
    raise TypeError(f"not an expression node: {node!r}")


# -- parser ----------------------------------------------------------------


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<tensor>\(x\)RF|\(x\)RS|\(x\)R)
  | (?P<split>_\(\s*(?P<leg>\d)\s*(?P<tw>F?)\s*\))
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*'*)
  | (?P<op>==|\|>|[()*+\-])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int
    leg: int = 0
    twisted: bool = False


def tokenize(text: str) -> list:
    toks = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup if m.lastgroup not in ("leg", "tw") else "split"
        col = pos - lstart + 1
        if m.group("ws"):
            for i, ch in enumerate(m.group("ws")):
                if ch == "\n":
                    line += 1
                    lstart = pos + i + 1
        elif m.group("tensor"):
            toks.append(_Tok("tensor", m.group("tensor")[3:], line, col))
        elif m.group("split"):
            leg = int(m.group("leg"))
            if leg not in (1, 2):
                raise DSLSyntaxError("Sweedler legs are _(1) and _(2)", line, col)
            toks.append(_Tok("split", m.group(0), line, col, leg, bool(m.group("tw"))))
        elif m.group("num"):
            toks.append(_Tok("num", m.group("num"), line, col))
        elif m.group("ident"):
            toks.append(_Tok("ident", m.group("ident"), line, col))
        else:
            toks.append(_Tok("op", m.group("op"), line, col))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - lstart + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, expected: str):
        t = self.peek()
        got = t.text or "end of input"
        raise DSLSyntaxError(f"unexpected {got!r}", t.line, t.col, expected)

    def expect_op(self, op: str):
        t = self.peek()
        if t.kind == "op" and t.text == op:
            return self.next()
        self.error(repr(op))

    def is_op(self, *ops) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def identity(self):
        lhs = self.sum()
        self.expect_op("==")
        rhs = self.sum()
        if self.peek().kind != "end":
            self.error("end of input")
        return Identity(lhs, rhs)

    def expression(self):
        e = self.sum()
        if self.peek().kind != "end":
            self.error("end of input")
        return e

    def sum(self):
        terms = []
        sign = 1
        if self.is_op("-"):
            self.next()
            sign = -1
        terms.append((sign, self.tensor()))
        while self.is_op("+", "-"):
            sign = 1 if self.next().text == "+" else -1
            terms.append((sign, self.tensor()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def tensor(self):
        legs = [self.act()]
        tag = None
        while self.peek().kind == "tensor":
            t = self.next()
            if tag is not None and t.text != tag:
                raise DSLSyntaxError("mixed tensor tags in one tensor", t.line, t.col, f"(x){tag}")
            tag = t.text
            legs.append(self.act())
        if tag is None:
            return legs[0]
        return Tensor(tuple(legs), tag)

    def act(self):
        left = self.product()
        if self.is_op("|>"):
            self.next()
            return Act(left, self.act())
        return left

    def product(self):
        factors = [self.postfix()]
        while self.is_op("*"):
            self.next()
            factors.append(self.postfix())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def postfix(self):
        node = self.atom()
        while self.peek().kind == "split":
            t = self.next()
            node = Split(node, t.leg, t.twisted)
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Num(Q(t.text))
        if t.kind == "ident":
            self.next()
            base = t.text.rstrip("'")
            prime = len(t.text) - len(base)
            if base in MAPS:
                if prime:
                    raise DSLSyntaxError("maps take no primes", t.line, t.col)
                self.expect_op("(")
                arg = self.sum()
                self.expect_op(")")
                return Map(base, arg)
            if base in FAMILY_GENS:
                return Gen(base, prime)
            if base in H_VARS + R_VARS + CONST_GENS:
                if prime:
                    raise DSLSyntaxError(f"{base} takes no primes", t.line, t.col)
                return Gen(base)
            raise DSLSyntaxError(f"unknown name {t.text!r}", t.line, t.col, "generator or map")
        if self.is_op("("):
            self.next()
            e = self.sum()
            self.expect_op(")")
            return e
        self.error("number, generator, map or '('")


def parse(text: str):
    """Parse an identity (``lhs == rhs``) or a bare expression."""
    p = _Parser(text)
    toks = p.toks
    if any(t.kind == "op" and t.text == "==" for t in toks):
        node = p.identity()
        for side in (node.lhs, node.rhs):
            _check_pairing(side)
        return node
    node = p.expression()
    _check_pairing(node)
    return node


def _walk(node) -> Iterable:
    yield node
    if isinstance(node, (Map, Split)):
        yield from _walk(node.arg)
    elif isinstance(node, Prod):
        for f in node.factors:
            yield from _walk(f)
    elif isinstance(node, Act):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Tensor):
        for l in node.legs:
            yield from _walk(l)
    elif isinstance(node, Sum):
        for _, t in node.terms:
            yield from _walk(t)
    elif isinstance(node, Identity):
        yield from _walk(node.lhs)
        yield from _walk(node.rhs)


def _summands(node) -> list:
    return [t for _, t in node.terms] if isinstance(node, Sum) else [node]


def _check_pairing(node) -> None:
    for term in _summands(node):
        fams: dict = {}
        for n in _walk(term):
            if isinstance(n, Gen) and n.name in FAMILY_GENS:
                fams.setdefault((n.name[:-1], n.prime), set()).add(n.name[-1])
            elif isinstance(n, Split):
                fams.setdefault((to_text(n.arg), n.twisted), set()).add(str(n.leg))
        for key, legs in fams.items():
            if legs != {"1", "2"}:
                raise DSLSyntaxError(f"summation family {key[0]} is not paired (legs {sorted(legs)})", 1, 1)


# -- binding and evaluation ---------------------------------------------------


@dataclass
class Binding:
    instance: BialgebroidInstance
    antipode: Optional[AntipodePair] = None
    cocycle: Optional[Cocycle] = None
    twisted: Optional[TwistedStructure] = None
    fixed: dict = field(default_factory=dict)  # free variable -> vector
    perturb: Optional[int] = None  # seed for lift perturbation; None disables

    def __post_init__(self):
        self._V = None
        if self.twisted is not None and self.cocycle is None:
            self.cocycle = self.twisted.cocycle

    @property
    def V(self):
        if self._V is None:
            if self.twisted is not None and self.twisted.V_F is not None:
                self._V = (self.twisted.V_F, self.twisted.V_F_inv)
            elif self.antipode is not None and self.cocycle is not None:
                V, Vinv, _ = compute_VF(self.cocycle, self.antipode)
                self._V = (V, Vinv)
            else:
                self._V = (None, None)
        return self._V

    @property
    def Fbar(self):
        if self.twisted is not None:
            return self.twisted.cocycle.Fbar_lift
        return self.cocycle.Fbar_lift if self.cocycle is not None else None


def requirements(node) -> set:
    """Data the expression needs: subset of {antipode, cocycle, inverse, twisted, twisted antipode, V inverse}."""
    need = set()
    for n in _walk(node):
        if isinstance(n, Gen):
            if n.name in ("F1", "F2"):
                need.add("cocycle")
            elif n.name in ("Fbar1", "Fbar2"):
                need.update({"cocycle", "inverse"})
            elif n.name == "V":
                need.update({"cocycle", "antipode"})
            elif n.name == "Vinv":
                need.update({"cocycle", "antipode", "V inverse"})
        elif isinstance(n, Map):
            if n.name in ("S", "Sinv"):
                need.add("antipode")
            elif n.name in ("SF", "SFinv"):
                need.update({"twisted", "twisted antipode"})
            elif n.name in ("alphaF", "betaF"):
                need.add("twisted")
        elif isinstance(n, Split) and n.twisted:
            need.add("twisted")
        elif isinstance(n, Tensor) and n.tag == "RF":
            need.add("twisted")
        elif isinstance(n, Tensor) and n.tag == "RS":
            need.add("antipode")
    return need


def missing(b: Binding, need: set) -> list:
    out = []
    if "antipode" in need and b.antipode is None:
        out.append("no antipode")
    if "cocycle" in need and b.cocycle is None:
        out.append("no cocycle")
    if "inverse" in need and b.cocycle is not None and b.Fbar is None:
        out.append("no inverse cocycle lift")
    if "twisted" in need and b.twisted is None:
        out.append("no twisted structure")
    if "twisted antipode" in need and (b.twisted is None or b.twisted.antipode is None):
        out.append("no twisted antipode")
    if "V inverse" in need and not out and b.V[1] is None:
        out.append("V_F not invertible")
    return out


@dataclass(frozen=True)
class Value:
    kind: str  # "scalar", "H", "R", "T"
    vec: object  # scalar or sparse dict
    arity: int = 1
    tag: str = ""


class Evaluator:
    def __init__(self, b: Binding, lifts: Optional[dict] = None):
        self.b = b
        B = b.instance
        self.B = B
        self.H, self.R, self.n = B.H, B.R, B.n
        lifts = lifts or {}
        self.F = lifts.get("F", b.cocycle.F_lift if b.cocycle is not None else None)
        self.Fbar = lifts.get("Fbar", b.Fbar)
        self.delta_cols = lifts.get("delta", [B.delta_basis(i) for i in range(self.n)])
        TB = b.twisted.instance if b.twisted is not None else None
        self.TB = TB
        self.deltaF_cols = lifts.get("deltaF", [TB.delta_basis(i) for i in range(self.n)] if TB else None)
        self._vals: dict = {}
        self._flipq: Optional[QuotientSpace] = None

    # ---- helpers
    def ctx_for(self, tag: str):
        if tag == "RF":
            if self.TB is None:
                raise UnboundGenerator("(x)RF needs a twisted structure")
            return self.TB.ctx
        return self.B.ctx

    def _flip_quotient(self) -> QuotientSpace:
        if self._flipq is None:
            if self.b.antipode is None:
                raise UnboundGenerator("(x)RS needs an antipode")
            ctx, n = self.B.ctx, self.n
            K = ctx.I_R + Subspace.span(n * n, (flip_S(self.b.antipode, k, n) for k in ctx.relators2))
            self._flipq = QuotientSpace.of(K)
        return self._flipq

    def _delta(self, v: dict, twisted: bool) -> dict:
        cols = self.deltaF_cols if twisted else self.delta_cols
        if cols is None:
            raise UnboundGenerator("_(1F) needs a twisted structure")
        out: dict = {}
        for i, c in v.items():
            axpy(out, cols[i], c)
        return out

    def _family_terms(self, key) -> list:
        kind = key[0]
        if kind == "F":
            if self.F is None:
                raise UnboundGenerator("F needs a cocycle")
            src = self.F
        elif kind == "Fbar":
            if self.Fbar is None:
                raise UnboundGenerator("Fbar needs an inverse cocycle lift")
            src = self.Fbar
        else:
            raise AssertionError(key)
        n = self.n
        return [((p // n, p % n), c) for p, c in sorted(src.items())]

    # ---- families
    def families(self, node) -> list:
        """Summation family keys of a summand in dependency order."""
        order: list = []

        def visit(n):
            if isinstance(n, Gen) and n.name in FAMILY_GENS:
                key = (n.name[:-1], n.prime)
                if key not in order:
                    order.append(key)
            elif isinstance(n, Split):
                visit(n.arg)
                key = ("split", to_text(n.arg), n.twisted)
                if key not in order:
                    order.append(key)
            elif isinstance(n, Map):
                visit(n.arg)
            elif isinstance(n, Prod):
                for f in n.factors:
                    visit(f)
            elif isinstance(n, Act):
                visit(n.left)
                visit(n.right)
            elif isinstance(n, Tensor):
                for l in n.legs:
                    visit(l)
            elif isinstance(n, Sum):
                for _, t in n.terms:
                    visit(t)
        visit(node)
        return order

    def eval_top(self, node, free: dict) -> Value:
        """Evaluate a (possibly summed) expression; each summand is its own scope."""
        total = None
        for sign, term in (node.terms if isinstance(node, Sum) else [(1, node)]):
            v = self.eval_scope(term, free)
            v = scale(v, Q(sign))
            total = v if total is None else add(total, v, self)
        return self.finish(total)

    def eval_scope(self, term, free: dict) -> Value:
        fams = self.families(term)
        splits = {k[1:]: k for k in fams if k[0] == "split"}
        acc = None

        def rec(k, env, coeff):
            nonlocal acc
            if k == len(fams):
                v = scale(self.ev(term, env, free), coeff)
                acc = v if acc is None else add(acc, v, self)
                return
            key = fams[k]
            if key[0] == "split":
                node = self._split_nodes[key]
                x = self.ev(node.arg, env, free)
                vec = as_h(x, self)
                lift = self._delta(vec, key[2])
                n = self.n
                for p, c in sorted(lift.items()):
                    env[key] = (p // n, p % n)
                    rec(k + 1, env, coeff * c)
                env.pop(key, None)
            else:
                for idx, c in self._family_terms(key):
                    env[key] = idx
                    rec(k + 1, env, coeff * c)
                env.pop(key, None)

        self._split_nodes = {}
        for n in _walk(term):
            if isinstance(n, Split):
                self._split_nodes[("split", to_text(n.arg), n.twisted)] = n
        rec(0, {}, ONE)
        return ZERO_VALUE if acc is None else acc

    def ev(self, node, env: dict, free: dict) -> Value:
        H, R = self.H, self.R
        if isinstance(node, Num):
            return Value("scalar", node.value)
        if isinstance(node, Gen):
            name = node.name
            if name in FAMILY_GENS:
                i, j = env[(name[:-1], node.prime)]
                return Value("H", {i if name.endswith("1") else j: ONE})
            if name in H_VARS:
                return Value("H", dict(free[name]))
            if name in R_VARS:
                return Value("R", dict(free[name]))
            if name == "V":
                return Value("H", dict(self.b.V[0]))
            if name == "Vinv":
                return Value("H", dict(self.b.V[1]))
            raise UnboundGenerator(name)
        if isinstance(node, Split):
            i, j = env[("split", to_text(node.arg), node.twisted)]
            return Value("H", {i if node.leg == 1 else j: ONE})
        if isinstance(node, Map):
            x = self.ev(node.arg, env, free)
            return self.apply_map(node.name, x)
        if isinstance(node, Prod):
            v = self.ev(node.factors[0], env, free)
            for f in node.factors[1:]:
                v = mul(v, self.ev(f, env, free), self)
            return v
        if isinstance(node, Act):
            h = as_h(self.ev(node.left, env, free), self)
            r = self.ev(node.right, env, free)
            if r.kind == "zero":
                return r
            if r.kind == "scalar":
                r = Value("R", vscale(R.unit_vec, r.vec))
            if r.kind != "R":
                raise ArityMismatch("|> acts on elements of R")
            return Value("R", self.B.act(h, r.vec))
        if isinstance(node, Tensor):
            legs = [as_h(self.ev(l, env, free), self) for l in node.legs]
            n = self.n
            vec = {0: ONE}
            for leg in legs:
                vec = {p * n + i: a * c for p, a in vec.items() for i, c in leg.items()}
            return Value("T", vec, len(legs), node.tag)
        if isinstance(node, Sum):
            total = None
            for sign, t in node.terms:
                v = scale(self.ev(t, env, free), Q(sign))
                total = v if total is None else add(total, v, self)
            return total
        raise TypeError(node)

    def apply_map(self, name: str, x: Value) -> Value:
        b = self.b
        if x.kind == "zero":
            return x
        if name in ("alpha", "beta", "alphaF", "betaF"):
            if x.kind == "scalar":
                x = Value("R", vscale(self.R.unit_vec, x.vec))
            if x.kind != "R":
                raise ArityMismatch(f"{name} takes an element of R")
            if name == "alpha":
                return Value("H", self.B.alpha(x.vec))
            if name == "beta":
                return Value("H", self.B.beta(x.vec))
            T = b.twisted
            m = T.alpha_F if name == "alphaF" else T.beta_F
            return Value("H", m(x.vec))
        h = as_h(x, self)
        if name == "eps":
            return Value("R", self.B.eps(h))
        if name == "S":
            return Value("H", b.antipode(h))
        if name == "Sinv":
            return Value("H", b.antipode.inv(h))
        SF = b.twisted.antipode
        if name == "SF":
            return Value("H", SF(h))
        if name == "SFinv":
            return Value("H", SF.inv(h))
        raise UnboundGenerator(name)

    def finish(self, v: Value) -> Value:
        if v is None:
            return ZERO_VALUE
        if v.kind == "T" and v.tag == "RS":
            if v.arity != 2:
                raise ArityMismatch("(x)RS is only defined for tensor squares")
            return Value("T", self._flip_quotient().reduce(v.vec), 2, v.tag)
        if v.kind == "T":
            ctx = self.ctx_for(v.tag)
            if v.arity == 2:
                return Value("T", ctx.reduce2(v.vec), 2, v.tag)
            if v.arity == 3:
                return Value("T", ctx.reduce3(v.vec), 3, v.tag)
            raise ArityMismatch("only tensor squares and cubes are supported")
        return v


ZERO_VALUE = Value("zero", None)


def _is_zero(v: Value) -> bool:
    if v.kind == "zero":
        return True
    if v.kind == "scalar":
        return v.vec == 0
    return not v.vec


def as_h(v: Value, ev: Evaluator) -> dict:
    if v.kind == "zero":
        return {}
    if v.kind == "H":
        return v.vec
    if v.kind == "scalar":
        return vscale(ev.H.unit_vec, v.vec)
    raise ArityMismatch(f"expected an element of H, got {v.kind}")


def scale(v: Value, c) -> Value:
    if v.kind == "zero":
        return v
    if v.kind == "scalar":
        return Value("scalar", v.vec * c)
    return Value(v.kind, vscale(v.vec, c), v.arity, v.tag)


def promote(v: Value, like: Value, ev: Evaluator) -> Value:
    """Scalars become multiples of the unit of the other side's kind."""
    if v.kind != "scalar" or like.kind == "scalar":
        return v
    c = v.vec
    if like.kind == "H":
        return Value("H", vscale(ev.H.unit_vec, c))
    if like.kind == "R":
        return Value("R", vscale(ev.R.unit_vec, c))
    n = ev.n
    vec = {0: ONE}
    for _ in range(like.arity):
        vec = {p * n + i: a * u for p, a in vec.items() for i, u in ev.H.unit_vec.items()}
    return Value("T", vscale(vec, c), like.arity, like.tag)


def add(u: Value, v: Value, ev: Evaluator) -> Value:
    if u.kind == "zero":
        return v
    if v.kind == "zero":
        return u
    u, v = promote(u, v, ev), promote(v, u, ev)
    if u.kind != v.kind or u.arity != v.arity or u.tag != v.tag:
        raise ArityMismatch(f"cannot add {u.kind}{u.arity}{u.tag} and {v.kind}{v.arity}{v.tag}")
    if u.kind == "scalar":
        return Value("scalar", u.vec + v.vec)
    return Value(u.kind, vadd(u.vec, v.vec), u.arity, u.tag)


def mul(u: Value, v: Value, ev: Evaluator) -> Value:
    if u.kind == "zero" or v.kind == "zero":
        return ZERO_VALUE
    if u.kind == "scalar":
        return scale(v, u.vec)
    if v.kind == "scalar":
        return scale(u, v.vec)
    if u.kind == v.kind == "H":
        return Value("H", ev.H.multiply(u.vec, v.vec))
    if u.kind == v.kind == "R":
        return Value("R", ev.R.multiply(u.vec, v.vec))
    raise ArityMismatch(f"cannot multiply {u.kind} by {v.kind}")


def equal(u: Value, v: Value, ev: Evaluator) -> bool:
    if u.kind == "zero" or v.kind == "zero":
        return _is_zero(ev.finish(u)) and _is_zero(ev.finish(v))
    u, v = promote(u, v, ev), promote(v, u, ev)
    if u.kind != v.kind or u.arity != v.arity or u.tag != v.tag:
        raise ArityMismatch(f"sides differ in kind: {u.kind}{u.arity}{u.tag} vs {v.kind}{v.arity}{v.tag}")
    if u.kind == "scalar":
        return u.vec == v.vec
    if u.kind == "T":
        u, v = ev.finish(u), ev.finish(v)
    return vcanon(u.vec) == vcanon(v.vec)


def free_variables(node) -> list:
    seen = []
    for n in _walk(node):
        if isinstance(n, Gen) and n.name in H_VARS + R_VARS and n.name not in seen:
            seen.append(n.name)
    return sorted(seen)


def assignments(b: Binding, names: list) -> Iterable:
    def domain(name):
        if name in b.fixed:
            return [b.fixed[name]]
        dim = b.instance.n if name in H_VARS else b.instance.R.dim
        return [{i: ONE} for i in range(dim)]

    def rec(k, cur):
        if k == len(names):
            yield dict(cur)
            return
        for v in domain(names[k]):
            cur[names[k]] = v
            yield from rec(k + 1, cur)
        cur.pop(names[k], None)
    yield from rec(0, {})


def perturbed_lifts(b: Binding, seed: int) -> dict:
    """Alternative lifts differing from the stored ones by kernel elements."""
    rng = random.Random(seed)
    B = b.instance
    ctx = B.ctx
    out: dict = {}

    def bump(v, rows):
        if not rows:
            return dict(v)
        r = rows[rng.randrange(len(rows))]
        return vadd(v, r, Q(rng.choice([1, -1, 2])))

    rows = list(ctx.I_R.rows)
    out["delta"] = [bump(B.delta_basis(i), rows) for i in range(B.n)]
    if b.cocycle is not None:
        out["F"] = bump(b.cocycle.F_lift, rows)
    if b.twisted is not None:
        frows = list(b.twisted.ctx.I_R.rows)
        out["deltaF"] = [bump(b.twisted.instance.delta_basis(i), frows) for i in range(B.n)]
        if b.Fbar is not None:
            out["Fbar"] = bump(b.Fbar, frows)
    return out


def _vec_text(v: Value):
    if v.kind == "zero":
        return []
    if v.kind == "scalar":
        return str(v.vec)
    return [[k, str(c)] for k, c in sorted(v.vec.items())]


def evaluate(node, b: Binding):
    """Identity -> (verdict, witness); expression -> Value (reduced)."""
    ev = Evaluator(b)
    if not isinstance(node, Identity):
        names = free_variables(node)
        free = {k: b.fixed[k] for k in names if k in b.fixed}
        if len(free) != len(names):
            raise UnboundGenerator(f"free variables need fixed values: {names}")
        v = ev.eval_top(node, free)
        if b.perturb is not None:
            alt = Evaluator(b, perturbed_lifts(b, b.perturb)).eval_top(node, free)
            if not equal(v, alt, ev):
                raise IllDefined("value depends on the choice of lifts", {"expression": to_text(node)})
        return v
    alt_ev = Evaluator(b, perturbed_lifts(b, b.perturb)) if b.perturb is not None else None
    names = free_variables(node)
    for free in assignments(b, names):
        lhs = ev.eval_top(node.lhs, free)
        rhs = ev.eval_top(node.rhs, free)
        if alt_ev is not None:
            for side, val in (("lhs", lhs), ("rhs", rhs)):
                alt = alt_ev.eval_top(getattr(node, side), free)
                if not equal(val, alt, ev):
                    raise IllDefined(f"{side} depends on the choice of lifts",
                                     {k: sorted(v) for k, v in free.items()})
        if not equal(lhs, rhs, ev):
            witness = {k: [[i, str(c)] for i, c in sorted(v.items())] for k, v in free.items()}
            witness["lhs"] = _vec_text(lhs)
            witness["rhs"] = _vec_text(rhs)
            return False, witness
    return True, None


# -- corpus ----------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    native: Optional[tuple] = None  # (source, check name)


def parse_corpus(text: str) -> list:
    """Blocks of ``[name]``, optional ``native: source / check`` and identity lines."""
    entries = []
    name = None
    native = None
    lines: list = []

    def flush():
        if name is not None:
            if not lines:
                raise DSLSyntaxError(f"corpus entry {name!r} has no identity", 1, 1)
            entries.append(CorpusEntry(name, " ".join(lines), native))

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            flush()
            name, native, lines = line[1:-1].strip(), None, []
        elif line.startswith("native:"):
            src, _, check = line[len("native:"):].partition("/")
            native = (src.strip(), check.strip())
        else:
            if name is None:
                raise DSLSyntaxError("identity outside a named block", 1, 1)
            lines.append(line)
    flush()
    return entries


def load_corpus(path: Optional[str] = None) -> list:
    if path is None:
        text = resources.files("hopftwist").joinpath("data/corpus.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_corpus(text)


def run_corpus(entries: list, b: Binding) -> Report:
    rep = Report("identity corpus")
    for e in entries:
        node = parse(e.text)
        miss = missing(b, requirements(node))
        if miss:
            rep.skip(e.name, "skipped: " + ", ".join(miss))
            continue
        with rep.timed(e.name) as w:
            try:
                ok, witness = evaluate(node, b)
            except IllDefined as exc:
                ok, witness = False, {"ill-defined": str(exc), **(exc.witness or {})}
            if not ok:
                w[0], w[1] = False, witness
    return rep
