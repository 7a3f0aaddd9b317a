"""
## Controls and ensures the experiment run layout.

Why: humans and machine parsers (tests, plotting scripts) find the same files in every run.


### importable:
    create_run_dir: creates the layout, fails on an existing run_dir, returns RunPaths.

*Tested by: tests/config/test_run_layout.py*
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class RunPaths:
    """Minimum viable layout expectations."""

    run_dir: Path
    meta_dir: Path
    logs_dir: Path
    artifacts_dir: Path
    metrics_jsonl: Path


def create_run_dir(run_root: Path, experiment_name: str, *, run_id: str) -> RunPaths:
    """
    Creates the layout for a single run:
      - meta/
      - logs/metrics.jsonl   (empty)
      - artifacts/
    """
    safe = "".join(c if (c.isalnum() or c in "-_") else "-" for c in experiment_name).strip("-")
    run_dir = run_root / f"{run_id}_{safe or 'run'}"

    # fail if run_dir already exists (no silent reuse/merging)
    run_dir.mkdir(parents=True, exist_ok=False)
    paths = RunPaths(
        run_dir=run_dir,
        meta_dir=run_dir / "meta",
        logs_dir=run_dir / "logs",
        artifacts_dir=run_dir / "artifacts",
        metrics_jsonl=run_dir / "logs" / "metrics.jsonl",
    )
    for d in (paths.meta_dir, paths.logs_dir, paths.artifacts_dir):
        d.mkdir(exist_ok=False)
    paths.metrics_jsonl.write_text("", encoding="utf-8")
    return paths
