"""Stable serialization of job results.

A report is a plain nested structure of dicts, lists, strings, ints and
bools.  The text rendering indents nested sections by two spaces and keeps
insertion order; the JSON rendering sorts keys.  Timings live in their own
top-level section so the rest is byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

REPORT_VERSION = 1


def _scalar(v: Any) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


INLINE_WIDTH = 60


def _inline(v: Any) -> str | None:
    """Short lists of scalars print on one line."""
    if not isinstance(v, list) or any(isinstance(x, (dict, list)) for x in v):
        return None
    text = "[" + ", ".join(_scalar(x) for x in v) + "]"
    return text if len(text) <= INLINE_WIDTH else None


def _render(value: Any, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            flat = _inline(v)
            if flat is not None:
                out.append(f"{pad}{k}: {flat}")
            elif isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                _render(v, indent + 1, out)
            elif isinstance(v, (dict, list)):
                out.append(f"{pad}{k}: []" if isinstance(v, list) else f"{pad}{k}: {{}}")
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict) and item:
                keys = list(item)
                head, rest = keys[0], {k: item[k] for k in keys[1:]}
                first = item[head]
                flat = _inline(first)
                if flat is not None:
                    out.append(f"{pad}- {head}: {flat}")
                elif isinstance(first, (dict, list)) and first:
                    out.append(f"{pad}- {head}:")
                    _render(first, indent + 2, out)
                else:
                    out.append(f"{pad}- {head}: {_scalar(first)}")
                _render(rest, indent + 1, out)
            elif isinstance(item, list):
                out.append(f"{pad}- [{', '.join(_scalar(x) for x in item)}]")
            else:
                out.append(f"{pad}- {_scalar(item)}")
    else:
        out.append(f"{pad}{_scalar(value)}")


def render_text(report: dict, timings: dict | None = None) -> str:
    out = ["# gcx report"]
    _render(report, 0, out)
    if timings is not None:
        out.append("")
        out.append("[timings]")
        for k, v in timings.items():
            out.append(f"{k}: {v}")
    return "\n".join(out) + "\n"


def render_json(report: dict, timings: dict | None = None) -> str:
    doc = {"version": REPORT_VERSION, "report": report}
    if timings is not None:
        doc["timings"] = timings
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
