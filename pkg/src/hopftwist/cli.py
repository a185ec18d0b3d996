"""Command-line front end: check, twist, eval, build.

Exit codes: 0 every applicable check passed, 1 some check failed, 2 malformed
input (unreadable file, bad JSON, DSL syntax error), 3 structurally
ill-defined input (algebra axioms, alpha/beta not algebra maps, or
non-commuting images, so H (x)_R H itself is meaningless).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from .antipode import (check_alpha_S_lemma, check_coring_antihom, check_delta_maps, check_hopf,
                       check_push_through)
from .bialgebroid import check_action, check_bialgebroid, check_lemma_halphar
from .differential import differential
from .instances import InvalidTable
from .io import (MalformedFile, build_from_table, dumps, instance_from_json, instance_to_json,
                 load_cocycle, load_instance, read_json, twisted_to_json)
from .report import FAIL, Report
from .rtensor import IllDefined
from .sweedler import (ArityMismatch, Binding, CorpusEntry, DSLSyntaxError, UnboundGenerator,
                       load_corpus, parse, run_corpus)
from .twist import (AssociativityFailure, Cocycle, MissingInverse, TwistError, check_cocycle,
                    compute_VF, twist_structure, twisted_antipode, twisted_diagnostics, untwist_roundtrip, verify_main_theorem)

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_ILL_DEFINED = 0, 1, 2, 3

# checks whose failure means the tensor product over R is not even defined
_STRUCTURAL_PREFIXES = ("H ", "R ", "alpha ", "beta ", "images commute")


@dataclass
class Outcome:
    code: int
    report: Report
    extra: Optional[Report] = None


def _data_path(*parts: str) -> Path:
    return Path(str(resources.files("hopftwist").joinpath("data", *parts)))


def resolve(path: str, kind: str) -> Path:
    """A file path, or the name of a bundled instance/cocycle."""
    p = Path(path)
    if p.exists():
        return p
    bundled = _data_path(kind, f"{path}.json")
    if bundled.exists():
        return bundled
    raise MalformedFile(f"{path}: no such file or bundled {kind[:-1]}")


def bundled_names(kind: str) -> list:
    return sorted(p.stem for p in _data_path(kind).glob("*.json"))


def _guarded(rep: Report, name: str, fn: Callable[[], Report], prefix: str = "") -> None:
    """Run a check stage; an exception becomes a named failure rather than a crash."""
    try:
        rep.extend(fn(), prefix=prefix)
    except (IllDefined, ValueError, ArithmeticError) as exc:
        rep.add(f"{prefix}{name}", FAIL, {"error": f"{type(exc).__name__}: {exc}"})


def _structural(rep: Report) -> bool:
    return any(c.name.startswith(_STRUCTURAL_PREFIXES) for c in rep.failures)


def check_suite(B, A, lift_validation: bool = True) -> Report:
    """Everything checkable on an instance, with the antipode stages when S is present."""
    rep = Report(f"check {B.name}".strip())
    _guarded(rep, "bialgebroid axioms", lambda: check_bialgebroid(B))
    if _structural(rep):
        return rep
    _guarded(rep, "action", lambda: check_action(B))
    _guarded(rep, "source/target lemma", lambda: check_lemma_halphar(B))
    _guarded(rep, "push-through", lambda: check_push_through(B))
    if A is None:
        rep.skip("antipode", "no antipode in the file")
        return rep
    _guarded(rep, "hopf", lambda: check_hopf(B, A))
    _guarded(rep, "coring antihomomorphism", lambda: check_coring_antihom(B, A))
    _guarded(rep, "alpha-S lemma", lambda: check_alpha_S_lemma(B, A))
    _guarded(rep, "delta maps", lambda: check_delta_maps(B, A, validate=lift_validation))
    return rep


def _code(rep: Report) -> int:
    if _structural(rep):
        return EXIT_ILL_DEFINED
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_check(instance_path: str, lift_validation: bool = True) -> Outcome:
    f = load_instance(resolve(instance_path, "instances"))
    rep = check_suite(f.instance, f.antipode, lift_validation)
    return Outcome(_code(rep), rep)


def cmd_twist(instance_path: str, cocycle_path: str, verify_all: bool = False,
              emit: Optional[str] = None, lift_validation: bool = True) -> Outcome:
    f = load_instance(resolve(instance_path, "instances"))
    B, A = f.instance, f.antipode
    c = load_cocycle(resolve(cocycle_path, "cocycles"), B)
    rep = Report(f"twist {B.name}".strip())
    if verify_all:
        base = check_suite(B, A, lift_validation)
        rep.extend(base, prefix="base ")
        if _structural(base):
            return Outcome(EXIT_ILL_DEFINED, rep)
    T = None
    extra = None
    try:
        if A is not None:
            mrep, T = verify_main_theorem(c, A, lift_validation=lift_validation)
            rep.extend(mrep)
        else:
            cr = check_cocycle(c)
            rep.extend(cr)
            if cr.ok:
                T = twist_structure(c)
                rep.extend(T.report)
            rep.skip("twisted antipode", "no antipode in the file")
    except TwistError as exc:
        rep.add("twist", FAIL, {"error": str(exc)})
        if exc.report is not None:
            rep.extend(exc.report)
        return Outcome(EXIT_FAIL, rep)
    except (AssociativityFailure, MissingInverse, IllDefined) as exc:
        rep.add("twist", FAIL, {"error": f"{type(exc).__name__}: {exc}"})
        return Outcome(EXIT_FAIL, rep)
    if verify_all and T is not None:
        _guarded(rep, "push-through", lambda: check_push_through(T.instance), prefix="twisted ")
        if A is not None and T.antipode is not None:
            _guarded(rep, "round trip", lambda: untwist_roundtrip(c, A, T), prefix="round trip: ")
            extra = twisted_diagnostics(T)
    if emit is not None and T is not None:
        Path(emit).write_text(dumps(twisted_to_json(T)))
    return Outcome(_code(rep), rep, extra)


def bind(B, A, c: Optional[Cocycle], seed: Optional[int] = None) -> Binding:
    """A DSL binding; with a cocycle, the twisted structure and S_F are attached when they exist."""
    T = None
    if c is not None:
        if not check_cocycle(c).ok:
            return Binding(B, A, c, None, perturb=seed)
        try:
            T = twist_structure(c, verify=False)
        except (TwistError, AssociativityFailure):
            return Binding(B, A, c, None, perturb=seed)
        if A is not None:
            V, Vinv, _ = compute_VF(T.cocycle, A)
            SF = twisted_antipode(T.cocycle, A, V, Vinv, T)[0] if Vinv is not None else None
            T = T.with_antipode(V, Vinv, SF)
    return Binding(B, A, c, T, perturb=seed)


def cmd_eval(instance_path: str, target: Optional[str], cocycle_path: Optional[str] = None,
             seed: Optional[int] = None, compare_native: bool = False) -> Outcome:
    f = load_instance(resolve(instance_path, "instances"))
    B, A = f.instance, f.antipode
    c = load_cocycle(resolve(cocycle_path, "cocycles"), B) if cocycle_path else None
    if target is None:
        entries = load_corpus()
    elif Path(target).exists():
        entries = load_corpus(target)
    else:
        parse(target)
        entries = [CorpusEntry("identity", target, None)]
    for e in entries:
        parse(e.text)
    b = bind(B, A, c, seed)
    rep = run_corpus(entries, b)
    extra = differential(entries, b, rep) if compare_native else None
    ok = rep.ok and (extra is None or extra.ok)
    return Outcome(EXIT_OK if ok else EXIT_FAIL, rep, extra)


def cmd_build(table_path: str, emit: Optional[str] = None) -> Outcome:
    try:
        B, A = build_from_table(read_json(table_path))
    except InvalidTable as exc:
        raise MalformedFile(str(exc)) from exc
    rep = check_suite(B, A)
    code = _code(rep)
    if emit is not None and code == EXIT_OK:
        Path(emit).write_text(dumps(instance_to_json(B, A)))
    return Outcome(code, rep)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopftwist", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print reports as JSON")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="verify an instance file")
    c.add_argument("--instance", required=True, help="instance file or bundled name")
    c.add_argument("--skip-lift-validation", action="store_true",
                   help="do not validate delta_S/delta_S^-1 on the relator spanning set")

    t = sub.add_parser("twist", help="twist an instance by a cocycle")
    t.add_argument("--instance", required=True)
    t.add_argument("--cocycle", required=True, help="cocycle file or bundled name")
    t.add_argument("--verify-all", action="store_true",
                   help="also check the base, push-through on the twist and the untwist round trip")
    t.add_argument("--emit", metavar="OUT", help="write the twisted instance here")
    t.add_argument("--skip-lift-validation", action="store_true",
                   help="skip the lift-independence checks of the identity catalog")

    e = sub.add_parser("eval", help="evaluate a Sweedler identity or a corpus file")
    e.add_argument("--instance", required=True)
    e.add_argument("--cocycle")
    e.add_argument("target", nargs="?", help="identity text or corpus path (default: bundled corpus)")
    e.add_argument("--seed", type=int, help="also re-evaluate with Delta and F lifts perturbed by this seed")
    e.add_argument("--native", action="store_true", help="compare verdicts with the native checks")

    b = sub.add_parser("build", help="build an instance from a group, groupoid or pair table")
    b.add_argument("table")
    b.add_argument("--emit", metavar="OUT")

    sub.add_parser("list", help="list bundled instances and cocycles")
    return p


def _print(out: Outcome, as_json: bool) -> None:
    reports = [r for r in (out.report, out.extra) if r is not None]
    if as_json:
        print(json.dumps({"exit": out.code, "reports": [r.to_dict() for r in reports]}, indent=1))
    else:
        for r in reports:
            print(r)
        print(f"exit {out.code}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "list":
            for kind in ("instances", "cocycles"):
                print(f"{kind}: " + " ".join(bundled_names(kind)))
            return EXIT_OK
        if args.cmd == "check":
            out = cmd_check(args.instance, not args.skip_lift_validation)
        elif args.cmd == "twist":
            out = cmd_twist(args.instance, args.cocycle, args.verify_all, args.emit,
                            not args.skip_lift_validation)
        elif args.cmd == "eval":
            out = cmd_eval(args.instance, args.target, args.cocycle, args.seed, args.native)
        else:
            out = cmd_build(args.table, args.emit)
    except DSLSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (UnboundGenerator, ArityMismatch) as exc:
        print(f"ill-formed identity: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (MalformedFile, OSError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    _print(out, args.json)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
