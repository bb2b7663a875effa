"""Structured verification reports shared by the CLI and the test suite."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources

__all__ = ["Check", "Report", "load_schema"]

STATUSES = ("pass", "fail", "skip")


@dataclass
class Check:
    id: str
    anchor: str
    status: str
    residual: str = "0"
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self):
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "residual": self.residual,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "details": self.details,
        }


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def verdict(self):
        live = [c for c in self.checks if c.status != "skip"]
        return "pass" if all(c.status == "pass" for c in live) else "fail"

    def add(self, id, anchor, passed, residual="0", elapsed_ms=0.0, **details):
        status = passed if isinstance(passed, str) else ("pass" if passed else "fail")
        chk = Check(id, anchor, status, str(residual), elapsed_ms, details)
        self.checks.append(chk)
        return chk

    @contextmanager
    def timed(self):
        """Yields a dict; its 'ms' entry holds the elapsed time on exit."""
        box = {}
        t0 = time.perf_counter()
        try:
            yield box
        finally:
            box["ms"] = (time.perf_counter() - t0) * 1000

    def as_dict(self):
        return {
            "command": self.command,
            "verdict": self.verdict,
            "checks": [c.as_dict() for c in self.checks],
            "data": self.data,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=False, default=str)

    def to_text(self):
        lines = [f"== {self.command}"]
        for c in self.checks:
            res = "" if c.residual in ("", "0") else f"  residual: {c.residual}"
            lines.append(f"[{c.status.upper():4}] {c.id}  ({c.anchor}){res}")
        for key, value in self.data.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{key}:")
                items = value.items() if isinstance(value, dict) else enumerate(value)
                for k, v in items:
                    if isinstance(v, dict):
                        lines.append(f"  - {v.get('status', k)}")
                        for step in v.get("steps", []):
                            lines.append(f"      {step}")
                    else:
                        lines.append(f"  {k}: {v}" if isinstance(value, dict) else f"  - {v}")
            else:
                lines.append(f"{key}: {value}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def load_schema():
    text = resources.files("sl2quant.data").joinpath("report.schema.json").read_text()
    return json.loads(text)
