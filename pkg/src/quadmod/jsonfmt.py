"""Canonical JSON serialization for reports.

Reports must be byte-reproducible: keys appear in the order the report
builder inserted them (never resorted), floats are rendered in scientific
notation with 17 significant digits (so every double round-trips exactly),
and complex values are encoded by their builders as [re, im] float pairs.
"""

from __future__ import annotations

import json
import math
from typing import Any

__all__ = ["canonical_json", "format_float"]


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.16e}"


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, complex):
        out.append("[" + format_float(obj.real) + ", " + format_float(obj.imag) + "]")
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for k, v in obj.items():
            if not first:
                out.append(", ")
            first = False
            out.append(json.dumps(str(k), ensure_ascii=True))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        first = True
        for v in obj:
            if not first:
                out.append(", ")
            first = False
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonically serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Serialize with insertion-ordered keys and .16e float formatting."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)
