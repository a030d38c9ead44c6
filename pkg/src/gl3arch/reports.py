"""Verification reports and their JSON encoding.

Every check produces a :class:`Report` with the stable field set
``lemma, params, numeric, target, deviation, verdict, diagnostics``.
A document wraps a list of reports in a body that is a pure function of the
inputs, plus an envelope (timestamp, package version) that is excluded from
reproducibility comparisons.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .exact_algebra import GaussianRational

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
CONFIRMED = "confirmed"
NOT_CONFIRMED = "membership not confirmed"
QUADRATURE_FAILURE = "quadrature failure"

_OK = frozenset({PASS, CONFIRMED})


def encode(value: Any) -> Any:
    """Map a value to plain JSON types, deterministically."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": encode(value.real), "im": encode(value.imag)}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, GaussianRational):
        return {"re": str(value.re), "im": str(value.im)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if hasattr(value, "to_dict"):
        return encode(value.to_dict())
    raise TypeError(f"cannot encode {type(value).__name__}")


@dataclass
class Report:
    lemma: str
    params: Dict[str, Any]
    numeric: Any
    target: Any
    deviation: Optional[float]
    verdict: str
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict in _OK

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": encode(self.params),
            "numeric": encode(self.numeric),
            "target": encode(self.target),
            "deviation": encode(self.deviation),
            "verdict": self.verdict,
            "diagnostics": encode(self.diagnostics),
        }


def document(reports: Sequence[Report], config: Optional[dict] = None,
             timestamp: Optional[str] = None) -> dict:
    from . import __version__

    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return {
        "schema_version": SCHEMA_VERSION,
        "body": {
            "config": encode(config or {}),
            "reports": [r.to_dict() for r in reports],
            "all_ok": all(r.ok for r in reports),
        },
        "envelope": {"generated_at": timestamp, "package_version": __version__},
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def body_bytes(doc: dict) -> bytes:
    """Canonical bytes of the reproducible part of a document."""
    return json.dumps(doc["body"], sort_keys=True, separators=(",", ":")).encode()


def format_text(reports: Sequence[Report]) -> str:
    lines: List[str] = []
    for r in reports:
        dev = "-" if r.deviation is None else f"{r.deviation:.3e}"
        params = " ".join(f"{k}={_short(v)}" for k, v in r.params.items())
        lines.append(f"[{r.verdict.upper()}] {r.lemma} {params} deviation={dev}")
        if r.numeric is not None:
            lines.append(f"    numeric = {_short(r.numeric)}")
        if r.target is not None:
            lines.append(f"    target  = {_short(r.target)}")
        for k in sorted(r.diagnostics):
            lines.append(f"    {k}: {_short(r.diagnostics[k])}")
    return "\n".join(lines) + "\n"


def _short(v: Any) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.15g}{v.imag:+.15g}j"
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)
