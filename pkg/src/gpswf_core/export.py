"""
## Deterministic CSV / JSON renderings shared by the CLI and experiment runs.

Contract:
    CSV   header row, comma separated, LF line endings, UTF-8, floats as 17 significant digits
    JSON  one object, keys sorted, 2-space indent, floats in shortest round-trip form
          (non-finite floats become null)

Both renderings are pure functions of their input, so repeated runs are byte-identical.

*Tested by: tests/test_export.py*
"""

from __future__ import annotations

import json
import math
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np


def format_float(x: float) -> str:
    return format(x, ".17g")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, float):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_json(obj: Mapping[str, Any]) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(text: str, out: Path | None) -> None:
    """Write to `out`, or to standard output when out is None (same bytes either way)."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def append_jsonl(path: Path, record: Mapping[str, Any]) -> None:
    """One sorted-key JSON object per line (metrics logs)."""
    with path.open("a", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(_jsonable(record), sort_keys=True, allow_nan=False) + "\n")
