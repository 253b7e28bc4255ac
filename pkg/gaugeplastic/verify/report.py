import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class Check:
    """Outcome of one structural check."""

    name: str
    status: CheckStatus
    anchor: str
    measured: Optional[float] = None
    threshold: Optional[float] = None
    reason: str = ""
    locations: List[Tuple[int, int]] = field(default_factory=list)
    exploratory: bool = False

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL

    def to_dict(self) -> Dict[str, object]:
        def number(x):
            if x is None or not math.isfinite(x):
                return None
            return float(x)

        return {
            "name": self.name,
            "status": self.status.value,
            "anchor": self.anchor,
            "measured": number(self.measured),
            "threshold": number(self.threshold),
            "reason": self.reason,
            "exploratory": self.exploratory,
            "locations": [list(map(int, loc)) for loc in self.locations],
        }


def skipped(name: str, anchor: str, reason: str) -> Check:
    return Check(name, CheckStatus.SKIPPED, anchor, reason=reason)


class VerificationReport:
    """Checks collected for one run; it fails iff a non-exploratory check fails."""

    def __init__(self, checks: Optional[List[Check]] = None):
        self.checks: List[Check] = list(checks or [])
        self.warnings: List[str] = []

    def add(self, check: Check):
        self.checks.append(check)

    def add_warning(self, message: str):
        self.warnings.append(message)

    @property
    def passed(self) -> bool:
        return not any(c.failed and not c.exploratory for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def counts(self) -> Dict[str, int]:
        out = {status.value: 0 for status in CheckStatus}
        for check in self.checks:
            out[check.status.value] += 1
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "counts": self.counts(),
            "warnings": list(self.warnings),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)
