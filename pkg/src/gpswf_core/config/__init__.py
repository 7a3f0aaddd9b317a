from .config_utils import (
    DeflectionConfig,
    ExperimentConfig,
    FamilyConfig,
    ProjectionConfig,
    RunConfig,
    SpectrumConfig,
    VerifyConfig,
    load_config,
    with_run_root,
    write_resolved_yaml,
)

__all__ = [
    "DeflectionConfig",
    "ExperimentConfig",
    "FamilyConfig",
    "ProjectionConfig",
    "RunConfig",
    "SpectrumConfig",
    "VerifyConfig",
    "load_config",
    "with_run_root",
    "write_resolved_yaml",
]
