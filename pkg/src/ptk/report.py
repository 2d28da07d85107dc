"""Pass/fail records shared by the checkers and the verification suites."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Optional

#: failures kept verbatim in a report; further ones are only counted
MAX_RECORDED_FAILURES = 50


@dataclass
class Report:
    suite: str
    seed: Optional[int] = None
    instances: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)
    ms: Optional[float] = None
    notes: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def check(self, ok: bool, input: Any, expected: Any = True, actual: Any = None) -> bool:
        self.instances += 1
        if ok:
            self.passes += 1
        else:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append({
                    "input": _jsonable(input),
                    "expected": _jsonable(expected),
                    "actual": _jsonable(actual),
                })
        return ok

    def note(self, text: str) -> None:
        self.notes.append(text)

    def merge(self, other: "Report") -> "Report":
        self.instances += other.instances
        self.passes += other.passes
        self.failure_count += other.failure_count
        room = MAX_RECORDED_FAILURES - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])
        self.notes.extend(other.notes)
        return self

    @contextmanager
    def timed(self):
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.ms = round((time.perf_counter() - start) * 1000, 3)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "instances": self.instances,
            "passes": self.passes,
            "failures": self.failures,
            "ms": self.ms if timing else None,
            "notes": self.notes,
        }

    def summary(self, timing: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        t = f" in {self.ms:.0f} ms" if timing and self.ms is not None else ""
        return f"{status} {self.suite}: {self.passes}/{self.instances} instances{t}"


def _jsonable(x):
    from .syntax import Node, to_text

    if isinstance(x, Node):
        return to_text(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)
