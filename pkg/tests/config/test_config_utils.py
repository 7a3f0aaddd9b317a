"""
## Unit tests for the experiment yaml loader, root resolver, writer, and pydantic's validation.

Tests:
    In general: provided cfg loads and can be manipulated without error.
    1) unknown top keys fail validation.
    2) unknown nested keys fail validation (run and section blocks).
    3) family parameters are range-checked (alpha > -1, c >= 0).
    4) section constraints: eps2 in (0, 1), N >= 0 (sorted, deduplicated).
    5) config overrides to a new dir successfully
    6) final resolved yaml written and roundtrip successful
    7) shipped configs under configs/ all validate.

*This tests: src/gpswf_core/config/config_utils.py*
"""

from __future__ import annotations

from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from gpswf_core.config.config_utils import (
    ExperimentConfig,
    load_config,
    with_run_root,
    write_resolved_yaml,
)


def _write(tmp_path: Path, text: str) -> Path:
    p = tmp_path / "cfg.yaml"
    p.write_text(text, encoding="utf-8")
    return p


def test_unknown_top_key_fails(tmp_path: Path) -> None:
    """Loads config, and ensures validation fails on unknown **top** key."""
    p = _write(tmp_path, "seed: 0\nrun:\n  experiment_name: smoke\nBAD_KEY: 123\n")
    with pytest.raises(ValidationError):
        load_config(p)


@pytest.mark.parametrize(
    "text",
    [
        "run:\n  experiment_name: smoke\n  BAD_NESTED: true\n",
        "family:\n  alpha: 0\n  c: 1\n  gamma: 2\n",
        "verify:\n  nmax: 4\n  tol: 1e-3\n",
    ],
)
def test_unknown_nested_key_fails(tmp_path: Path, text: str) -> None:
    """Loads config, and ensures validation fails on unknown **nested** key."""
    with pytest.raises(ValidationError):
        load_config(_write(tmp_path, text))


@pytest.mark.parametrize("family", ["alpha: -1.0\n  c: 1", "alpha: 0\n  c: -0.5"])
def test_family_range_checked(tmp_path: Path, family: str) -> None:
    with pytest.raises(ValidationError):
        load_config(_write(tmp_path, f"family:\n  {family}\n"))


def test_deflection_eps2_open_interval(tmp_path: Path) -> None:
    with pytest.raises(ValidationError):
        load_config(_write(tmp_path, "deflection:\n  eps2: [0.1, 1.0]\n  N: [2]\n"))


def test_projection_N_sorted_unique(tmp_path: Path) -> None:
    cfg = load_config(_write(tmp_path, "projection:\n  signals: [kernel]\n  N: [30, 20, 30]\n"))
    assert cfg.projection is not None
    assert cfg.projection.N == (20, 30)

    with pytest.raises(ValidationError):
        load_config(_write(tmp_path, "projection:\n  signals: [kernel]\n  N: [-1]\n"))


def test_empty_file_gives_defaults(tmp_path: Path) -> None:
    cfg = load_config(_write(tmp_path, ""))
    assert cfg == ExperimentConfig()
    assert cfg.spectrum is None and cfg.projection is None


def test_with_run_root_returns_new_cfg(tmp_path: Path) -> None:
    """
    with_run_root **copies** config to new dir.
    """
    cfg0 = load_config(_write(tmp_path, "seed: 1\nrun:\n  experiment_name: smoke\n"))
    cfg1 = with_run_root(cfg0, tmp_path / "runs")

    assert cfg0.run.run_root == "runs"  # default
    assert cfg1.run.run_root.endswith("runs")
    assert cfg0 is not cfg1
    assert cfg1.family == cfg0.family


def test_write_resolved_yaml_roundtrip(tmp_path: Path) -> None:
    """Resolved yaml roundtrips successfully."""
    cfg = load_config(
        _write(
            tmp_path,
            "seed: 7\nrun:\n  experiment_name: smoke\nfamily:\n  alpha: 0.5\n  c: 10\n"
            "deflection:\n  eps2: [0.1]\n  N: [3]\n",
        )
    )

    out = tmp_path / "config.resolved.yaml"
    write_resolved_yaml(cfg, out)

    data = yaml.safe_load(out.read_text(encoding="utf-8"))
    assert data["seed"] == 7
    assert data["run"]["experiment_name"] == "smoke"
    assert data["run"]["run_root"] == "runs"
    assert data["family"] == {"alpha": 0.5, "c": 10.0}
    assert data["deflection"] == {"eps2": [0.1], "N": [3]}
    assert ExperimentConfig.model_validate(data) == cfg


def test_shipped_configs_validate(repo_root: Path) -> None:
    paths = sorted((repo_root / "configs").glob("*.yaml"))
    assert {p.name for p in paths} >= {"smoke.yaml", "example1.yaml", "example2.yaml"}
    for p in paths:
        load_config(p)
