"""Input parsing and run reports for the command line."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .errors import ConfigurationError

REPORT_SCHEMA = "bbgkz.report/1"


def read_json(path: str) -> Any:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"{path}: {exc.strerror}")
    if not raw.strip():
        raise ConfigurationError(f"{path}: file is empty")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    except UnicodeDecodeError:
        raise ConfigurationError(f"{path}: not UTF-8 text")


def digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()[:16]


def parse_vector(text: str, what: str = "vector") -> List[Fraction]:
    text = text.strip().strip("()[]")
    if not text:
        return []
    try:
        return [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"cannot parse {what} {text!r}; expected comma-separated numbers")


def parse_int_vector(text: str, what: str = "vector") -> List[int]:
    v = parse_vector(text, what)
    if any(x.denominator != 1 for x in v):
        raise ConfigurationError(f"{what} {text!r} must have integer entries")
    return [int(x) for x in v]


def parse_int_matrix(text: str, what: str = "matrix") -> List[List[int]]:
    """Rows separated by ';', entries by ','."""
    text = text.strip()
    if not text:
        return []
    return [parse_int_vector(row, what) for row in text.split(";")]


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return str(x)


def _text(x: Any) -> str:
    x = jsonable(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (dict, list)):
        return json.dumps(x, separators=(", ", ": "))
    return str(x)


@dataclass
class RunReport:
    command: List[str]
    inputs: Dict[str, str] = field(default_factory=dict)
    facts: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    residuals: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    failed_stage: Optional[str] = None

    def add_input(self, path: str):
        if os.path.isfile(path):
            self.inputs[path] = digest(path)

    def fact(self, key: str, value: Any):
        self.facts[key] = value

    def check(self, key: str, ok: bool) -> bool:
        self.checks[key] = bool(ok)
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and self.failed_stage is None

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "facts": jsonable(self.facts),
            "checks": self.checks,
            "residuals": jsonable(self.residuals),
            "passed": self.passed,
        }
        if self.failed_stage is not None:
            out["failed_stage"] = self.failed_stage
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        lines = []
        for k, v in self.facts.items():
            lines.append(f"{k}: {_text(v)}")
        for k, v in self.residuals.items():
            lines.append(f"residual {k}: {_text(v)}")
        for k, v in self.checks.items():
            lines.append(f"check {k}: {'pass' if v else 'FAIL'}")
        if self.failed_stage:
            lines.append(f"failed stage: {self.failed_stage}")
        return "\n".join(lines)

    def timing_line(self) -> str:
        return "timings: " + " ".join(f"{k}={v:.3f}s" for k, v in self.timings.items())
