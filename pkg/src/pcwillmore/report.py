"""Run reports: deterministic JSON with a versioned schema."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__

SCHEMA = 1


def _plain(obj):
    """Convert numpy scalars, complex numbers and non-finite floats to JSON values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def digest(payload: bytes, params: dict) -> str:
    h = hashlib.sha256()
    h.update(payload)
    h.update(json.dumps(_plain(params), sort_keys=True).encode())
    return h.hexdigest()


@dataclass
class Check:
    name: str
    value: object
    tolerance: object = None
    passed: bool | None = None

    def as_dict(self):
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class RunReport:
    command: str
    input_digest: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timings: dict | None = None

    def check(self, name, value, tolerance=None, passed=None) -> bool | None:
        self.checks.append(Check(name, value, tolerance, passed))
        return passed

    def check_le(self, name, value, tolerance) -> bool:
        ok = bool(value <= tolerance)
        self.checks.append(Check(name, value, tolerance, ok))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def as_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "tool": "wl",
            "version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "params": self.params,
            "checks": [c.as_dict() for c in self.checks],
            "passed": self.passed,
            "data": self.data,
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return _plain(out)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"
