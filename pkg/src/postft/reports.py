"""Structured law and verification reports with JSON rendering."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(x) -> Any:
    """Best-effort conversion of payloads and counterexamples to JSON values."""
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: jsonable(v) for k, v in x.items()}
        return [[jsonable(k), jsonable(v)] for k, v in x.items()]
    if isinstance(x, (frozenset, set)):
        return sorted((jsonable(v) for v in x), key=repr)
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    return repr(x)


@dataclass
class CheckResult:
    cases: int = 0
    failures: int = 0
    counterexample: Any = None

    def to_json(self):
        return {
            "cases": self.cases,
            "failures": self.failures,
            "counterexample": jsonable(self.counterexample),
        }


@dataclass
class LawReport:
    """Per-law pass/fail counts, keeping the first counterexample of each."""

    subject: str
    instance: str | None = None
    checks: dict[str, CheckResult] = field(default_factory=dict)
    findings: dict[str, Any] = field(default_factory=dict)

    def record(self, name: str, ok: bool, example: Any = None):
        result = self.checks.setdefault(name, CheckResult())
        result.cases += 1
        if not ok:
            result.failures += 1
            if result.counterexample is None:
                result.counterexample = example if example is not None else "n/a"

    @property
    def passed(self) -> bool:
        return all(r.failures == 0 for r in self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, r in self.checks.items() if r.failures]

    def to_json(self):
        doc = {
            "subject": self.subject,
            "passed": self.passed,
            "checks": {name: r.to_json() for name, r in sorted(self.checks.items())},
        }
        if self.instance is not None:
            doc["instance"] = self.instance
        if self.findings:
            doc["findings"] = {k: jsonable(v) for k, v in sorted(self.findings.items())}
        return doc


@dataclass
class VerdictReport:
    theorem: str
    instance: str
    cases: int = 0
    failures: int = 0
    counterexample: Any = None
    scoped_out: bool = False
    note: str | None = None
    witness: Any = None

    def record(self, ok: bool, example: Any = None):
        self.cases += 1
        if ok:
            return
        if self.scoped_out:
            if self.witness is None:
                self.witness = example
            return
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = example

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self):
        doc = {
            "theorem": self.theorem,
            "instance": self.instance,
            "cases": self.cases,
            "failures": self.failures,
        }
        if self.counterexample is not None:
            doc["counterexample"] = jsonable(self.counterexample)
        if self.scoped_out:
            doc["scoped_out"] = True
            doc["note"] = self.note
            if self.witness is not None:
                doc["witness"] = jsonable(self.witness)
        return doc
