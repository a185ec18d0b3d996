"""Structured verification reports."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


def _plain(x: Any) -> Any:
    """Make witnesses JSON friendly; rationals become "p/q" strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    witness: Optional[dict] = None
    detail: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        if self.detail:
            d["detail"] = self.detail
        d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name: str, status: str, witness=None, detail: str = "", seconds: float = 0.0) -> Check:
        c = Check(name, status, witness, detail, seconds)
        self.checks.append(c)
        return c

    def passed_check(self, name: str, ok: bool, witness=None, detail: str = "", seconds: float = 0.0) -> Check:
        return self.add(name, PASS if ok else FAIL, None if ok else witness, detail, seconds)

    def skip(self, name: str, reason: str) -> Check:
        return self.add(name, SKIPPED, detail=reason)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail, c.seconds))

    @contextmanager
    def timed(self, name: str):
        """Run a block that yields a mutable holder ``[ok, witness]``."""
        holder = [True, None, ""]
        t0 = time.perf_counter()
        yield holder
        self.passed_check(name, holder[0], holder[1], holder[2], time.perf_counter() - t0)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def status(self, name: str) -> str:
        return self.get(name).status

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "verdict": PASS if self.ok else FAIL,
            "checks": [c.to_dict() for c in self.checks],
        }

    def lines(self) -> list:
        out = [f"== {self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status:7}] {c.name}"
            if c.detail:
                line += f"  ({c.detail})"
            if c.status == FAIL and c.witness is not None:
                line += f"  witness={_plain(c.witness)}"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
