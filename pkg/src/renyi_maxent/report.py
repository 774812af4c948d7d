"""Conformance report containers.

A check compares a measured quantity against the value a formula predicts.
Hard checks decide the exit status of ``renyi-maxent verify``; soft checks
track printed formulas that are known to disagree with direct computation
and are surfaced as warnings only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    deviation: float
    measured: float | None = None
    expected: float | None = None
    soft: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "identity_name": self.name,
            "max_abs_deviation": _jsonable(self.deviation),
            "pass": bool(self.passed),
            "measured": _jsonable(self.measured),
            "expected": _jsonable(self.expected),
            "soft": self.soft,
            "note": self.note,
        }


def _jsonable(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class ConformanceReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "ConformanceReport") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.soft)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.soft and not c.passed]

    @property
    def warnings(self) -> list[Check]:
        return [c for c in self.checks if c.soft and not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "n_checks": len(self.checks),
            "n_failures": len(self.failures),
            "n_warnings": len(self.warnings),
            "checks": [c.to_dict() for c in self.checks],
        }


def close_check(name, measured, expected, tol, *, relative=False, soft=False, note="") -> Check:
    """Build a check that passes when ``|measured - expected| <= tol``."""
    dev = abs(measured - expected)
    if relative:
        dev /= max(abs(expected), 1e-300)
    return Check(name, bool(dev <= tol), dev, measured, expected, soft=soft, note=note)
