"""Deterministic report serialization.

All CLI output flows through here: scalars become strings ("p/q" for
rationals, "log2:<decimal>" for log-domain values), dict keys are sorted,
and no timestamps or timings enter the canonical payload, so identical
invocations yield byte-identical reports.  Timings, when requested, go to
stderr.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass, fields
from fractions import Fraction

from .brackets import EstimateBracket, WindowRecord
from .scalars import LogScalar, as_float, scalar_to_str


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, (Fraction, LogScalar)):
        return scalar_to_str(obj)
    if isinstance(obj, EstimateBracket):
        return {
            "estimate": to_jsonable(obj.estimate),
            "estimate_float": to_jsonable(as_float(obj.estimate)),
            "converged": obj.converged,
            "depth": obj.depth,
            "tol": to_jsonable(obj.tol),
            "side": obj.side,
            "flagged": obj.flagged,
            "windows": [to_jsonable(w) for w in obj.windows],
        }
    if isinstance(obj, WindowRecord):
        out = {
            "j": obj.j,
            "sup": to_jsonable(obj.sup),
            "inf": to_jsonable(obj.inf),
            "exact": obj.exact,
        }
        if obj.note:
            out["note"] = obj.note
        return out
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in fields(obj) if f.repr and not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def stable_dumps(obj, indent=2) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=indent)


def write_text(path, text) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
