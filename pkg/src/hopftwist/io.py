"""JSON file formats for instances, cocycles and builder tables.

Rationals are always strings "p/q" (or "p"), never JSON numbers.  Writers
emit a canonical form: Delta lifts are reduced to the canonical section of
H (x)_R H, keys are sorted and zero coefficients dropped, so two files
describing the same structure are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .algebra import Algebra, AlgebraMap
from .antipode import AntipodePair
from .bialgebroid import BialgebroidInstance
from .instances import (GroupoidTable, GroupTable, build_group_hopf, build_groupoid_algebroid,
                        build_pair_algebroid)
from .linalg import Matrix, Q, qstr
from .rtensor import TensorContext
from .twist import Cocycle, TwistedStructure

FORMAT_INSTANCE = "hopftwist-instance/1"
FORMAT_COCYCLE = "hopftwist-cocycle/1"


class MalformedFile(ValueError):
    """Input that does not parse or violates the format invariants."""


def _rat(x, where: str):
    if not isinstance(x, str):
        raise MalformedFile(f"{where}: rationals must be strings, got {x!r}")
    try:
        return Q(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedFile(f"{where}: bad rational {x!r}") from exc


def _index(x, bound: int, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < bound:
        raise MalformedFile(f"{where}: index {x!r} out of range 0..{bound - 1}")
    return x


def _field(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise MalformedFile(f"{where}: missing field {key!r}")
    return d[key]


# -- algebras and matrices ---------------------------------------------------


def algebra_to_json(A: Algebra) -> dict:
    return {
        "dim": A.dim,
        "unit": [qstr(u) for u in A.unit],
        "mu": [[i, j, k, qstr(c)] for i in range(A.dim) for j in range(A.dim)
               for k, c in sorted(A.table[i][j].items()) if c],
    }


def algebra_from_json(d, where: str) -> Algebra:
    dim = _field(d, "dim", where)
    if not isinstance(dim, int) or dim < 1:
        raise MalformedFile(f"{where}: dim must be a positive integer")
    unit = _field(d, "unit", where)
    if not isinstance(unit, list) or len(unit) != dim:
        raise MalformedFile(f"{where}: unit must list {dim} rationals")
    trip = []
    for t in _field(d, "mu", where):
        if not isinstance(t, list) or len(t) != 4:
            raise MalformedFile(f"{where}: mu entries are [i, j, k, \"p/q\"]")
        trip.append((_index(t[0], dim, where), _index(t[1], dim, where),
                     _index(t[2], dim, where), _rat(t[3], where)))
    return Algebra.from_triples(dim, trip, [_rat(u, where) for u in unit])


def matrix_to_json(M: Matrix) -> list:
    return [[qstr(x) for x in row] for row in M.to_rows()]


def matrix_from_json(rows, shape: tuple, where: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise MalformedFile(f"{where}: expected {shape[0]} rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != shape[1]:
            raise MalformedFile(f"{where}: expected rows of length {shape[1]}")
        out.append([_rat(x, where) for x in row])
    return Matrix.from_rows(out, shape[1])


def terms_to_json(v: dict, n: int) -> list:
    return [[p // n, p % n, qstr(c)] for p, c in sorted(v.items()) if c]


def terms_from_json(terms, n: int, where: str) -> dict:
    if not isinstance(terms, list):
        raise MalformedFile(f"{where}: expected a list of [i, j, \"p/q\"] terms")
    out: dict = {}
    for t in terms:
        if not isinstance(t, list) or len(t) != 3:
            raise MalformedFile(f"{where}: terms are [i, j, \"p/q\"]")
        p = _index(t[0], n, where) * n + _index(t[1], n, where)
        out[p] = out.get(p, 0) + _rat(t[2], where)
    return {p: c for p, c in out.items() if c}


# -- instances ---------------------------------------------------------------


@dataclass
class InstanceFile:
    instance: BialgebroidInstance
    antipode: Optional[AntipodePair] = None


def instance_to_json(B: BialgebroidInstance, A: Optional[AntipodePair] = None) -> dict:
    n = B.n
    d = {
        "format": FORMAT_INSTANCE,
        "scalar": "rational",
        "name": B.name,
        "R": algebra_to_json(B.R),
        "H": algebra_to_json(B.H),
        "alpha": matrix_to_json(B.ctx.alpha.matrix),
        "beta": matrix_to_json(B.ctx.beta.matrix),
        "epsilon": matrix_to_json(B.epsilon),
        "delta": {str(h): terms_to_json(B.delta_basis(h), n) for h in range(n)},
    }
    if A is not None:
        d["S"] = matrix_to_json(A.S)
        d["S_inv"] = matrix_to_json(A.S_inv)
    return d


def instance_from_json(d, check_context: bool = False) -> InstanceFile:
    """Parse an instance.  The tensor context is built without verifying
    alpha/beta, so structural defects surface as named check failures."""
    if not isinstance(d, dict):
        raise MalformedFile("instance: top level must be an object")
    if d.get("scalar") != "rational":
        raise MalformedFile("instance: scalar must be \"rational\"")
    R = algebra_from_json(_field(d, "R", "instance"), "R")
    H = algebra_from_json(_field(d, "H", "instance"), "H")
    n, m = H.dim, R.dim
    alpha = matrix_from_json(_field(d, "alpha", "instance"), (n, m), "alpha")
    beta = matrix_from_json(_field(d, "beta", "instance"), (n, m), "beta")
    eps = matrix_from_json(_field(d, "epsilon", "instance"), (m, n), "epsilon")
    delta = _field(d, "delta", "instance")
    if not isinstance(delta, dict):
        raise MalformedFile("delta: expected an object keyed by basis index")
    cols = [dict() for _ in range(n)]
    for key, terms in delta.items():
        try:
            h = int(key)
        except ValueError as exc:
            raise MalformedFile(f"delta: bad key {key!r}") from exc
        cols[_index(h, n, "delta")] = terms_from_json(terms, n, f"delta[{key}]")
    if len(delta) != n:
        raise MalformedFile(f"delta: expected lifts for all {n} basis elements")
    ctx = TensorContext(H, R, AlgebraMap(R, H, alpha), AlgebraMap(R.opposite(), H, beta),
                        check=check_context)
    B = BialgebroidInstance(ctx, Matrix.from_columns(n * n, cols), eps, str(d.get("name", "")))
    A = None
    if "S" in d:
        S = matrix_from_json(d["S"], (n, n), "S")
        if "S_inv" in d:
            A = AntipodePair(S, matrix_from_json(d["S_inv"], (n, n), "S_inv"))
        else:
            try:
                A = AntipodePair.from_matrix(S)
            except ValueError as exc:
                raise MalformedFile("S: singular and no S_inv given") from exc
    return InstanceFile(B, A)


def twisted_to_json(T: TwistedStructure) -> dict:
    """The twisted bialgebroid (with S_F when known) in the instance format."""
    return instance_to_json(T.instance, T.antipode)


# -- cocycles ----------------------------------------------------------------


def cocycle_to_json(c: Cocycle) -> dict:
    n = c.base.n
    d = {"format": FORMAT_COCYCLE, "scalar": "rational", "F": terms_to_json(c.F_lift, n)}
    if c.Fbar_lift is not None:
        d["Fbar"] = terms_to_json(c.Fbar_lift, n)
    return d


def cocycle_from_json(d, B: BialgebroidInstance) -> Cocycle:
    if not isinstance(d, dict):
        raise MalformedFile("cocycle: top level must be an object")
    if d.get("scalar") != "rational":
        raise MalformedFile("cocycle: scalar must be \"rational\"")
    F = terms_from_json(_field(d, "F", "cocycle"), B.n, "F")
    Fbar = terms_from_json(d["Fbar"], B.n, "Fbar") if "Fbar" in d else None
    return Cocycle.of(B, F, Fbar)


# -- builder tables ------------------------------------------------------------


def build_from_table(d) -> tuple:
    """``{"kind": "group" | "groupoid" | "pair", ...}`` -> (instance, antipode)."""
    if not isinstance(d, dict):
        raise MalformedFile("table: top level must be an object")
    kind = _field(d, "kind", "table")
    name = str(d.get("name", ""))
    try:
        if kind == "group":
            g = GroupTable.of(_field(d, "product", "table"), d.get("identity", 0))
            return build_group_hopf(g, verify=False, name=name)
        if kind == "groupoid":
            inv = d.get("inverse")
            gt = GroupoidTable.of(_field(d, "objects", "table"),
                                  [tuple(x) for x in _field(d, "morphisms", "table")],
                                  _field(d, "product", "table"), inv)
            return build_groupoid_algebroid(gt, verify=False, name=name)
        if kind == "pair":
            return build_pair_algebroid(algebra_from_json(_field(d, "R", "table"), "R"), verify=False, name=name)
    except (TypeError, IndexError) as exc:
        raise MalformedFile(f"table: {exc}") from exc
    raise MalformedFile(f"table: unknown kind {kind!r}")


# -- text helpers ----------------------------------------------------------------


def _emit(x, indent: int) -> str:
    pad = " " * indent
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f'{pad} {json.dumps(k)}: {_emit(x[k], indent + 1)}' for k in sorted(x, key=_key_order)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if all(not isinstance(v, (list, dict)) for v in x):
            return json.dumps(x)
        items = [pad + " " + _emit(v, indent + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x)


def _key_order(k: str):
    # numeric keys (Delta lifts) in numeric order, the rest alphabetically
    return (0, int(k), "") if k.isdigit() else (1, 0, k)


def dumps(d: dict) -> str:
    """Canonical text: sorted keys, one innermost list per line."""
    return _emit(d, 0) + "\n"


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc


def load_instance(path) -> InstanceFile:
    return instance_from_json(read_json(path))


def save_instance(path, B: BialgebroidInstance, A: Optional[AntipodePair] = None) -> None:
    Path(path).write_text(dumps(instance_to_json(B, A)))


def load_cocycle(path, B: BialgebroidInstance) -> Cocycle:
    return cocycle_from_json(read_json(path), B)


def save_cocycle(path, c: Cocycle) -> None:
    Path(path).write_text(dumps(cocycle_to_json(c)))
