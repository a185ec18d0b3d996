"""Compare DSL corpus verdicts with the native checks they restate."""

from __future__ import annotations

from typing import Callable, Optional

from .antipode import check_alpha_S_lemma, check_coring_antihom, check_hopf
from .bialgebroid import check_action, check_bialgebroid, check_lemma_halphar
from .report import FAIL, PASS, SKIPPED, Report
from .sweedler import Binding, run_corpus
from .twist import check_cocycle, twisted_antipode, verify_section3


def _native_sources(b: Binding) -> dict:
    """source name -> thunk producing the native report (None when not applicable)."""
    B, A, c, T = b.instance, b.antipode, b.cocycle, b.twisted
    has_SF = T is not None and T.antipode is not None
    return {
        "bialgebroid": lambda: check_bialgebroid(B),
        "action": lambda: check_action(B),
        "lemma": lambda: check_lemma_halphar(B),
        "hopf": (lambda: check_hopf(B, A)) if A is not None else None,
        "coring": (lambda: check_coring_antihom(B, A)) if A is not None else None,
        "alphaS": (lambda: check_alpha_S_lemma(B, A)) if A is not None else None,
        "cocycle": (lambda: check_cocycle(c)) if c is not None else None,
        "twisted": (lambda: check_bialgebroid(T.instance, structure=False)) if T is not None else None,
        "twisted_antipode": (lambda: twisted_antipode(T.cocycle, A, T.V_F, T.V_F_inv, T)[1])
        if has_SF and A is not None else None,
        "catalog": (lambda: verify_section3(T.cocycle, A, T)) if has_SF and A is not None else None,
        "twisted_hopf": (lambda: check_hopf(T.instance, T.antipode)) if has_SF else None,
    }


class NativeVerdicts:
    """Lazily computed native reports, one per source."""

    def __init__(self, b: Binding):
        self._thunks: dict = _native_sources(b)
        self._reports: dict = {}

    def status(self, source: str, check: str) -> Optional[str]:
        if source not in self._thunks:
            raise KeyError(f"unknown native source {source!r}")
        thunk: Optional[Callable] = self._thunks[source]
        if thunk is None:
            return SKIPPED
        if source not in self._reports:
            self._reports[source] = thunk()
        try:
            return self._reports[source].status(check)
        except KeyError:
            return None


def differential(entries: list, b: Binding, corpus_report: Optional[Report] = None) -> Report:
    """One check per corpus entry with a native counterpart: pass iff the verdicts agree.

    A skipped DSL identity agrees with a skipped (inapplicable) native check.
    """
    dsl = corpus_report if corpus_report is not None else run_corpus(entries, b)
    native = NativeVerdicts(b)
    rep = Report("DSL vs native engine")
    for e in entries:
        if e.native is None:
            continue
        source, check = e.native
        ns = native.status(source, check)
        if ns is None:
            rep.add(e.name, FAIL, {"reason": f"native check {source}/{check} not found"})
            continue
        ds = dsl.status(e.name)
        agree = (ds == SKIPPED) == (ns == SKIPPED) and (ds == PASS) == (ns == PASS)
        rep.passed_check(e.name, agree, {"dsl": ds, "native": ns},
                         detail=f"{source} / {check}: {ds}")
    return rep
