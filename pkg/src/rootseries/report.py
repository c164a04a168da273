"""Check records and reports shared by the verification suites and the CLI."""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .scalars import XiElement, scalar_to_json


def to_jsonable(obj: Any) -> Any:
    """Recursively convert scalars and containers into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, XiElement, complex)):
        return scalar_to_json(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    inputs: Any = None
    expected: Any = None
    actual: Any = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": to_jsonable(self.inputs),
            "expected": to_jsonable(self.expected),
            "actual": to_jsonable(self.actual),
            "pass": bool(self.passed),
        }


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    payload: Any = None
    wall_time: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: c.name)

    def summary(self) -> dict:
        passed = sum(1 for c in self.checks if c.passed)
        return {"total": len(self.checks), "passed": passed, "failed": len(self.checks) - passed}

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "summary": self.summary(),
            "checks": [c.to_json() for c in self.sorted_checks()],
        }
        if self.payload is not None:
            out["result"] = to_jsonable(self.payload)
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["name", "inputs", "expected", "actual", "pass"])
            for rec in self.to_json()["checks"]:
                writer.writerow([
                    rec["name"],
                    json.dumps(rec["inputs"], sort_keys=True),
                    json.dumps(rec["expected"], sort_keys=True),
                    json.dumps(rec["actual"], sort_keys=True),
                    "true" if rec["pass"] else "false",
                ])
            return buf.getvalue()
        raise ValueError(f"unknown format {fmt!r}")


def random_rational(rng: random.Random, nonzero: bool = True) -> Fraction:
    """Numerator in [-9, 9] (minus 0 when ``nonzero``), denominator in [1, 9]."""
    nums = [n for n in range(-9, 10) if n or not nonzero]
    return Fraction(rng.choice(nums), rng.randint(1, 9))


def random_rationals(rng: random.Random, count: int, nonzero: bool = True) -> tuple:
    return tuple(random_rational(rng, nonzero) for _ in range(count))
