from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CheckResult:
    """Outcome of one verification check on one instance."""

    check: str
    k: int
    n: int
    passed: bool
    counterexample: Optional[Any] = None
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> str:
        record = {
            "check": self.check,
            "k": self.k,
            "n": self.n,
            "pass": self.passed,
            "counterexample": self.counterexample,
        }
        record.update(self.details)
        if timing:
            record["elapsed_ms"] = round(self.elapsed_ms, 3)
        return json.dumps(record, sort_keys=False)
