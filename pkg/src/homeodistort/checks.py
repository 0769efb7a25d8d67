"""Pass/fail bookkeeping shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .pl import format_rational


@dataclass
class Check:
    name: str
    passed: bool
    index: Optional[int] = None
    witness: Optional[Fraction] = None
    detail: str = ""

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.index is not None:
            out["index"] = self.index
        if self.witness is not None:
            out["witness"] = format_rational(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, index=None, witness=None, detail="") -> Check:
        c = Check(name, bool(passed), index, witness, detail)
        self.checks.append(c)
        return c

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        bad = self.failures()
        head = f"{self.title}: {len(self.checks) - len(bad)}/{len(self.checks)} checks passed"
        lines = [head]
        for c in bad:
            where = "" if c.index is None else f" [n={c.index}]"
            wit = "" if c.witness is None else f" witness x={c.witness}"
            lines.append(f"  FAIL {c.name}{where}{wit} {c.detail}".rstrip())
        return "\n".join(lines)


def first_difference(f, g, candidates) -> Optional[Fraction]:
    """First candidate point where the two maps disagree, if any."""
    for x in candidates:
        if f(x) != g(x):
            return x
    return None
