"""Check reports shared by every verification routine."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CheckReport:
    name: str
    residual: float
    tolerance: float
    passed: bool
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    value: Any = None
    runtime_ms: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "residual": _jsonable(self.residual),
            "tolerance": _jsonable(self.tolerance),
            "pass": bool(self.passed),
            "seed": self.seed,
            "params": _jsonable(self.params),
            "value": _jsonable(self.value),
            "runtime_ms": float(self.runtime_ms),
        }

    def __bool__(self) -> bool:
        return bool(self.passed)


def check(name: str, residual: float, tolerance: float, *, seed=None, value=None, **params) -> CheckReport:
    """Build a report that passes iff ``residual <= tolerance``."""
    residual = float(residual)
    ok = bool(np.isfinite(residual) and residual <= tolerance)
    return CheckReport(name, residual, float(tolerance), ok, dict(params), seed, value)


def merge(name: str, reports: list[CheckReport], **params) -> CheckReport:
    """Fold sub-reports into one: worst residual ratio, pass iff all pass."""
    if not reports:
        return CheckReport(name, 0.0, 0.0, True, dict(params))
    worst = max(reports, key=lambda r: _ratio(r))
    out = CheckReport(
        name,
        worst.residual,
        worst.tolerance,
        all(r.passed for r in reports),
        dict(params),
        worst.seed,
    )
    out.params["parts"] = {r.name: r.residual for r in reports}
    failing = [r.name for r in reports if not r.passed]
    if failing:
        out.params["failing"] = failing
    return out


def _ratio(r: CheckReport) -> float:
    if r.tolerance > 0:
        return r.residual / r.tolerance
    return math.inf if r.residual > 0 else 0.0


@contextmanager
def timed(holder: list):
    """Append elapsed milliseconds to ``holder`` on exit."""
    t0 = time.perf_counter()
    try:
        yield
    finally:
        holder.append((time.perf_counter() - t0) * 1e3)


def timed_call(fn, *args, **kwargs) -> CheckReport:
    """Run a check and record its wall time in ``runtime_ms``."""
    t0 = time.perf_counter()
    rep = fn(*args, **kwargs)
    rep.runtime_ms = (time.perf_counter() - t0) * 1e3
    return rep


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v
