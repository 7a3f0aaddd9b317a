"""
## Experiment run logic, kept out of the CLI entrypoint.

Why: separate tests (speed + tracebacks) from argument parsing.

Logic flow at play:
  load validated config -> override run_root
  -> create run_dir layout -> write config.resolved.yaml
  -> run configured sections, each writing one artifact + metrics.jsonl lines:
       spectrum    artifacts/spectrum.csv
       projection  artifacts/projection.csv
       verify      artifacts/verify.json
       deflection  artifacts/deflection.csv
  -> provenance bundle (manifest over everything above)
  Return: run_dir   (for use from CLI)


*Tested by: tests/config/test_config_runner.py*
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from gpswf_core.approx import deflection, project, projection_rule
from gpswf_core.basis import GpswfParams, compute_basis
from gpswf_core.bounds import suite_passed, verify_suite
from gpswf_core.config.config_utils import (
    DeflectionConfig,
    ExperimentConfig,
    ProjectionConfig,
    SpectrumConfig,
    VerifyConfig,
    load_config,
    with_run_root,
    write_resolved_yaml,
)
from gpswf_core.config.run_layout import RunPaths, create_run_dir
from gpswf_core.export import append_jsonl, render_csv, render_json, write_text
from gpswf_core.provenance import write_provenance_bundle
from gpswf_core.reports import (
    DEFLECTION_HEADER,
    EIG_HEADER,
    PROJECTION_HEADER,
    deflection_row,
    eig_rows,
    projection_row,
    verify_rows,
)
from gpswf_core.signals import parse_signal_spec
from gpswf_core.spectrum import compute_spectrum, log_lambdas

logger = logging.getLogger(__name__)


def _params_block(params: GpswfParams) -> dict[str, float]:
    return {"alpha": params.alpha, "c": params.c}


def _run_spectrum(paths: RunPaths, params: GpswfParams, section: SpectrumConfig) -> None:
    basis = compute_basis(params, section.count - 1)
    rows = eig_rows(basis, compute_spectrum(basis))
    write_text(render_csv(EIG_HEADER, rows), paths.artifacts_dir / "spectrum.csv")
    for row in rows:
        append_jsonl(paths.metrics_jsonl, {"section": "spectrum", **row})


def _run_projection(paths: RunPaths, params: GpswfParams, section: ProjectionConfig) -> None:
    # one basis for every N; lambda_N comes from the same chain
    basis = compute_basis(params, max(section.N))
    lam = np.exp(log_lambdas(basis))
    rows = []
    for token in section.signals:
        signal = parse_signal_spec(token, alpha=params.alpha, c=params.c)
        rule = projection_rule(basis, signal)
        for N in section.N:
            report = project(basis, signal, N, rule, lambda_n=float(lam[N]))
            row = projection_row(token, report)
            rows.append(row)
            append_jsonl(
                paths.metrics_jsonl,
                {"section": "projection", **row, "warnings": list(report.warnings)},
            )
            logger.info("projected %s N=%d err=%.3e", token, N, report.err_weighted_l2)
    write_text(render_csv(PROJECTION_HEADER, rows), paths.artifacts_dir / "projection.csv")


def _run_verify(paths: RunPaths, params: GpswfParams, section: VerifyConfig) -> bool:
    reports = verify_suite(params.alpha, params.c, section.nmax)
    rows = verify_rows(reports)
    passed = suite_passed(reports)
    doc = {"params": _params_block(params), "passed": passed, "results": rows}
    write_text(render_json(doc), paths.artifacts_dir / "verify.json")
    for row in rows:
        append_jsonl(paths.metrics_jsonl, {"section": "verify", **row})
    if not passed:
        logger.warning("verification suite reported violated bounds (see verify.json)")
    return passed


def _run_deflection(paths: RunPaths, params: GpswfParams, section: DeflectionConfig) -> None:
    basis = compute_basis(params, max(section.N))
    lam = np.exp(log_lambdas(basis))
    rows = []
    for eps2 in section.eps2:
        for N in section.N:
            row = deflection_row(eps2, N, deflection(lam, N, eps2))
            rows.append(row)
            append_jsonl(paths.metrics_jsonl, {"section": "deflection", **row})
    write_text(render_csv(DEFLECTION_HEADER, rows), paths.artifacts_dir / "deflection.csv")


def run_sections(cfg: ExperimentConfig, paths: RunPaths) -> None:
    """Run every configured section in a fixed order (spectrum, projection, verify, deflection)."""
    params = cfg.family.params()
    if cfg.spectrum is not None:
        _run_spectrum(paths, params, cfg.spectrum)
    if cfg.projection is not None:
        _run_projection(paths, params, cfg.projection)
    if cfg.verify is not None:
        _run_verify(paths, params, cfg.verify)
    if cfg.deflection is not None:
        _run_deflection(paths, params, cfg.deflection)


def run_once(
    *,
    config_path: Path,
    run_root: Path,
    run_id: str = "smoke",
    argv: Sequence[str] | None = None,
) -> Path:
    """
    load validated config -> override run_root
    -> create run_dir layout -> write config.resolved.yaml
    -> sections -> provenance
    Returns: run_dir
    """
    cfg = load_config(config_path)
    cfg = with_run_root(cfg, run_root)

    paths = create_run_dir(run_root, cfg.run.experiment_name, run_id=run_id)
    # written after all overrides: this is what actually runs
    write_resolved_yaml(cfg, paths.run_dir / "config.resolved.yaml")

    run_sections(cfg, paths)

    write_provenance_bundle(
        run_dir=paths.run_dir,
        seed=int(cfg.seed),
        argv=list(argv) if argv is not None else [],
    )
    return paths.run_dir
