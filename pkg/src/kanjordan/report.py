"""Check reports shared by all verifiers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Violation:
    """One failing instance: the basis inputs and the nonzero residual."""

    inputs: tuple
    residual: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"inputs": [str(i) for i in self.inputs], "residual": dict(self.residual)}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class CheckReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    total: int = 0
    timing_ms: float = 0.0
    checked: int = 0

    @property
    def status(self) -> str:
        return "pass" if self.total == 0 else "fail"

    @property
    def ok(self) -> bool:
        return self.total == 0

    def __bool__(self):
        # truthy when the check passed, so ``assert report`` reads naturally
        return self.ok

    def add(self, violation: Violation, limit: int | None) -> None:
        self.total += 1
        if limit is None or len(self.violations) < limit:
            self.violations.append(violation)

    def merge(self, other: "CheckReport", limit: int | None = None) -> "CheckReport":
        out = CheckReport(self.subject, [], self.total + other.total,
                          self.timing_ms + other.timing_ms, self.checked + other.checked)
        vs = self.violations + other.violations
        out.violations = vs if limit is None else vs[:limit]
        return out

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status,
            "total_violations": self.total,
            "checked": self.checked,
            "timing_ms": round(self.timing_ms, 3),
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        vs = [Violation(tuple(v["inputs"]), dict(v["residual"]), v.get("note", "")) for v in d["violations"]]
        rep = cls(d["subject"], vs, d["total_violations"], d["timing_ms"], d.get("checked", 0))
        if rep.status != d["status"]:
            raise ValueError("inconsistent report status")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "CheckReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        return f"{self.subject}: {self.status} ({self.total} violations, {self.checked} checked, {self.timing_ms:.0f} ms)"
