"""Structured pass/fail records for theorem checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass
class VerificationReport:
    theorem: str
    params: dict[str, Any]
    passed: bool
    bound: Fraction | str | None = None
    min_observed: int | None = None
    max_observed: int | None = None
    flags: dict[str, Any] = field(default_factory=dict)
    witness: dict | None = None
    details: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": self.params,
            "pass": self.passed,
            "bound": None if self.bound is None else str(self.bound),
            "min_observed": self.min_observed,
            "max_observed": self.max_observed,
            "flags": self.flags,
            "witness": self.witness,
            "details": self.details,
            "elapsed_ms": self.elapsed_ms,
        }

    def dumps(self, timing: bool = True) -> str:
        obj = self.to_json()
        if not timing:
            obj.pop("elapsed_ms")
        return json.dumps(obj, indent=2, sort_keys=True)
