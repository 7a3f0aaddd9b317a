"""
## Experiment config models & helpers. Uses pydantic.

Why: an experiment (family, which tables to compute, which signals to project) is one YAML
file. Strict models catch typos, frozen instances keep overrides from mutating anything.


Importables
    ### models
    RunConfig:         naming + where runs go
    FamilyConfig:      (alpha, c) of the GPSWF family
    SpectrumConfig:    spectral table size
    ProjectionConfig:  signal tokens and truncations N
    VerifyConfig:      bound suite range
    DeflectionConfig:  eps^2 values and truncations N
    ExperimentConfig:  the whole file; every section but run/family is optional

    ### helpers
    load_config:         loads yaml, validates with ExperimentConfig.model_validate
    with_run_root:       **copies** cfg with run.run_root overridden
    write_resolved_yaml: writes the final resolved yaml (what actually ran) into the run dir


*Tested by: tests/config/test_config_utils.py*
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

from gpswf_core.basis import GpswfParams


class RunConfig(BaseModel):
    """
    Run-specific config.

    Strict: unknown keys are errors.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment_name: str = "smoke"
    run_root: str = "runs"


class FamilyConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha: float = Field(default=0.0, gt=-1.0, allow_inf_nan=False)
    c: float = Field(default=1.0, ge=0.0, allow_inf_nan=False)

    def params(self) -> GpswfParams:
        return GpswfParams(alpha=self.alpha, c=self.c)


class SpectrumConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    count: int = Field(default=20, ge=1)


class ProjectionConfig(BaseModel):
    """signals: tokens of the `sinc:a=40 | kernel | sobolev:... | file:PATH` grammar."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    signals: tuple[str, ...] = Field(min_length=1)
    N: tuple[int, ...] = Field(min_length=1)

    @field_validator("N")
    @classmethod
    def _non_negative(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(n < 0 for n in v):
            raise ValueError("truncations must be >= 0")
        return tuple(sorted(set(v)))


class VerifyConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    nmax: int = Field(default=20, ge=0)


class DeflectionConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    eps2: tuple[float, ...] = Field(min_length=1)
    N: tuple[int, ...] = Field(min_length=1)

    @field_validator("eps2")
    @classmethod
    def _open_unit(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0.0 < e < 1.0 for e in v):
            raise ValueError("eps2 values must lie in (0, 1)")
        return v


class ExperimentConfig(BaseModel):
    """
    Applied config.

    Strict: unknown keys are errors, at every depth.

    Defaults:
        seed = 0            recorded in provenance; sobolev tokens carry their own seeds
        run = RunConfig()
        family = FamilyConfig()
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = 0
    run: RunConfig = RunConfig()
    family: FamilyConfig = FamilyConfig()
    spectrum: SpectrumConfig | None = None
    projection: ProjectionConfig | None = None
    verify: VerifyConfig | None = None
    deflection: DeflectionConfig | None = None


def load_config(path: Path) -> ExperimentConfig:
    """Load YAML and validate strictly (unknown keys hard-fail)."""
    raw: Any
    with path.open("r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}  # empty file or `null` -> defaults
    return ExperimentConfig.model_validate(raw)


def with_run_root(cfg: ExperimentConfig, run_root: Path) -> ExperimentConfig:
    """Return a new config with run.run_root overridden (no mutation)."""
    return cfg.model_copy(update={"run": cfg.run.model_copy(update={"run_root": str(run_root)})})


def write_resolved_yaml(cfg: ExperimentConfig, out_path: Path) -> None:
    """Write resolved config snapshot (this is what actually ran)."""
    payload = cfg.model_dump(mode="json")
    out_path.write_text(yaml.safe_dump(payload, sort_keys=True), encoding="utf-8")
