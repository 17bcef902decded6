"""Report serialization helpers.

Reports are JSON on stdout.  Floats go through Python's shortest
round-trip repr (at most 17 significant digits, lossless), complex
values become {"re": ..., "im": ...} pairs, and key order is insertion
order, so identical runs print byte-identical reports.
"""
from __future__ import annotations

import json

import numpy as np

VERSION = "0.1.0"


def jsonable(obj):
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return {"re": c.real, "im": c.imag}
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def render_report(command: str, inputs: dict, results, warnings) -> str:
    report = {
        "command": command,
        "inputs": jsonable(inputs),
        "results": jsonable(results),
        "warnings": [str(w) for w in warnings],
        "version": VERSION,
    }
    return json.dumps(report, indent=2)


def parse_complex_literal(text: str) -> complex:
    """Parse "re+imi" flag literals like 0.5+0.25i, -1, i, 0.3i."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise ValueError("empty complex literal")
    try:
        return complex(cleaned.replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"bad complex literal {text!r}; "
                         "use the re+imi form, e.g. 0.5+0.25i") from exc


def parse_complex_list(text: str) -> list:
    return [parse_complex_literal(part) for part in text.split(",") if part.strip()]
