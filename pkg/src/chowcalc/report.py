"""Report items shared by the verification suites and the DSL runner."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .spaces import ChowClass

STATUSES = ("pass", "fail", "error")
KEY_ORDER = ("name", "status", "sign", "flags", "output", "witness", "millis")


@dataclass
class ReportItem:
    name: str
    status: str
    sign: int | None = None
    flags: dict | None = None
    output: str | None = None
    witness: dict | None = None
    millis: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {}
        for key in KEY_ORDER:
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def text(self) -> str:
        line = f"{self.status.upper():5} {self.name}"
        if self.sign is not None:
            line += f" sign={self.sign:+d}"
        if self.flags:
            line += " flags=" + ",".join(f"{k}={str(v).lower()}" for k, v in self.flags.items())
        if self.output is not None:
            line += f" => {self.output}"
        if self.witness:
            line += " witness=" + json.dumps(self.witness, sort_keys=False)
        return line


@dataclass
class Report:
    items: list[ReportItem] = field(default_factory=list)

    def extend(self, items) -> None:
        self.items.extend(items)

    @property
    def ok(self) -> bool:
        return all(i.passed for i in self.items)

    def to_json(self) -> str:
        return json.dumps([i.to_dict() for i in self.items], indent=2)

    def to_text(self) -> str:
        """Deterministic text form; timings are left out so reruns compare equal."""
        lines = [i.text() for i in self.items]
        passed = sum(i.passed for i in self.items)
        lines.append(f"{passed}/{len(self.items)} passed")
        return "\n".join(lines) + "\n"


def first_difference(expected: ChowClass, actual: ChowClass, context="") -> dict | None:
    """First basis coefficient (in basis order) where two classes on one space differ.

    `context` may be a zero-argument callable, evaluated only when a difference is found.
    """
    if expected.space is actual.space and expected.poly == actual.poly:
        return None
    if callable(context):
        context = context()
    if expected.space is not actual.space:
        return {"context": context, "reason": f"spaces differ: {expected.space.name} vs {actual.space.name}"}
    space = expected.space
    for k in sorted(expected.poly.weights() | actual.poly.weights()):
        for m in space.basis_monomials(k):
            a, b = expected.poly.coefficient(m), actual.poly.coefficient(m)
            if a != b:
                out = {"basis": space.label(m), "expected": a, "actual": b}
                if context:
                    out["context"] = context
                return out
    return None


@contextmanager
def stopwatch():
    box = {"millis": 0}
    start = time.perf_counter()
    try:
        yield box
    finally:
        box["millis"] = int(round((time.perf_counter() - start) * 1000))
