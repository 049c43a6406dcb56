"""Verification reports with a stable JSON schema."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = "1.0"


def _clean(x):
    """JSON-safe, deterministic conversion (complex -> [re, im], inf -> str)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _clean(x.item())
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return x
    return x


@dataclass
class Check:
    check: str
    residual: float
    threshold: float
    constant: Any = None
    passed: bool | None = None
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    primary: bool = True

    def __post_init__(self):
        self.residual = float(self.residual)
        if self.passed is None:
            self.passed = bool(self.residual < self.threshold)

    def to_json(self) -> dict:
        return _clean({
            "check": self.check,
            "residual": self.residual,
            "threshold": self.threshold,
            "constant": self.constant,
            "pass": self.passed,
            "primary": self.primary,
            "warnings": list(self.warnings),
            "details": self.details,
        })


@dataclass
class VerificationReport:
    command: str
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            if prefix:
                c.check = f"{prefix}{c.check}"
            self.checks.append(c)
        for w in other.warnings:
            if w not in self.warnings:
                self.warnings.append(w)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.check == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.primary)

    def failing(self) -> list[str]:
        return [c.check for c in self.checks if c.primary and not c.passed]

    def to_json(self) -> dict:
        return _clean({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params,
            "meta": self.meta,
            "checks": [c.to_json() for c in self.checks],
            "warnings": list(self.warnings),
            "pass": self.passed,
        })

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)
