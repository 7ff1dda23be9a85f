from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckOutcome:
    """
    One named pass/fail verdict. `detail` holds JSON-ready values only (strings, ints, bools,
    lists and dicts of those), so a check can be embedded in a report as-is.
    """

    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}

    @classmethod
    def from_dict(cls, source: dict) -> "CheckOutcome":
        return cls(source["name"], bool(source["passed"]), dict(source.get("detail", {})))


def all_passed(checks: list[CheckOutcome]) -> bool:
    return all(c.passed for c in checks)
