"""
## CSV / JSON renderings.

Tests:
    1) CSV: header order, 17 significant digits, empty cells for None, LF endings.
    2) JSON: sorted keys, non-finite floats -> null, numpy scalars and arrays.
    3) write_text: stdout and file receive the same bytes; append_jsonl one record per line.

*This tests: src/gpswf_core/export.py*
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from gpswf_core.export import append_jsonl, format_float, render_csv, render_json, write_text


def test_format_float_round_trips() -> None:
    for x in (0.1, 1.0 / 3.0, 1e-300, 2.0**-1074, 123456789.123456789):
        assert float(format_float(x)) == x
    assert format_float(0.5) == "0.5"


def test_render_csv() -> None:
    rows = [{"b": 1.0 / 3.0, "a": 1, "c": None}, {"a": 2, "b": True, "c": "x"}]
    text = render_csv(("a", "b", "c"), rows)
    assert text == "a,b,c\n1,0.33333333333333331,\n2,true,x\n"
    assert "\r" not in text


def test_render_json_nonfinite_and_numpy() -> None:
    doc = {
        "z": [1.0, math.nan, math.inf],
        "a": {"n": np.int64(3), "arr": np.array([0.25, -math.inf])},
    }
    text = render_json(doc)
    parsed = json.loads(text)
    assert parsed == {"a": {"arr": [0.25, None], "n": 3}, "z": [1.0, None, None]}
    assert text.index('"a"') < text.index('"z"')
    assert text.endswith("\n")


def test_write_text_stdout_matches_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    text = render_csv(("n", "v"), [{"n": 0, "v": 0.1}])
    write_text(text, None)
    out = capsys.readouterr().out
    target = tmp_path / "nested" / "t.csv"
    write_text(text, target)
    assert target.read_bytes() == out.encode("utf-8")


def test_append_jsonl(tmp_path: Path) -> None:
    path = tmp_path / "metrics.jsonl"
    append_jsonl(path, {"b": 1, "a": math.nan})
    append_jsonl(path, {"a": 2.5})
    lines = path.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line) for line in lines] == [{"a": None, "b": 1}, {"a": 2.5}]
    assert lines[0] == '{"a": null, "b": 1}'
