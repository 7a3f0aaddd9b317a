"""
## Tables built from computed objects: one row schema per command / experiment section.

Importables
    EIG_HEADER, eig_rows            n, chi, lambda, mu_abs, chi_lower, chi_upper
    EVAL_HEADER, eval_rows          x, psi (and dpsi)
    PROJECTION_HEADER, projection_row
    DEFLECTION_HEADER, deflection_row
    VERIFY_HEADER, verify_rows, verify_lines

*Tested by: tests/test_cli.py, tests/config/test_config_runner.py*
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

import numpy as np
from numpy.typing import NDArray

from gpswf_core.approx import DeflectionResult, ProjectionReport
from gpswf_core.basis import GpswfBasis
from gpswf_core.bounds import BoundReport, chi_bounds
from gpswf_core.spectrum import SpectralTriple

EIG_HEADER = ("n", "chi", "lambda", "mu_abs", "chi_lower", "chi_upper")
EVAL_HEADER = ("x", "psi", "dpsi")
PROJECTION_HEADER = ("signal", "N", "err_weighted_l2", "err_sup_grid", "signal_norm", "bound_rhs")
DEFLECTION_HEADER = ("eps2", "N", "deflection", "bound", "case")
VERIFY_HEADER = ("bound_id", "n", "k", "status", "scale", "lhs", "rhs", "margin", "note")


def eig_rows(basis: GpswfBasis, spectrum: Sequence[SpectralTriple]) -> list[dict[str, Any]]:
    rows = []
    for t in spectrum:
        b = chi_bounds(t.n, basis.alpha, basis.c)
        rows.append(
            {
                "n": t.n,
                "chi": t.chi,
                "lambda": t.lambda_,
                "mu_abs": t.mu_abs,
                "chi_lower": b.lower_classical,
                "chi_upper": b.upper,
            }
        )
    return rows


def eval_rows(
    x: NDArray[np.float64], psi: NDArray[np.float64], dpsi: NDArray[np.float64]
) -> list[dict[str, Any]]:
    return [
        {"x": float(a), "psi": float(b), "dpsi": float(d)}
        for a, b, d in zip(x, psi, dpsi, strict=True)
    ]


def projection_row(signal: str, report: ProjectionReport) -> dict[str, Any]:
    return {"signal": signal, **report.as_row()}


def deflection_row(eps2: float, N: int, result: DeflectionResult) -> dict[str, Any]:
    return {"eps2": eps2, "N": N, **result.as_dict()}


def verify_rows(reports: Sequence[BoundReport]) -> list[dict[str, Any]]:
    return [r.model_dump(mode="python") | {"bound_id": r.bound_id.value} for r in reports]


def verify_lines(reports: Sequence[BoundReport]) -> list[str]:
    """One line per report: PASS / FAIL / SKIP / INFO, bound id, index, lhs, rhs, margin."""
    label = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP", "info": "INFO"}
    lines = []
    for r in reports:
        where = "" if r.n is None else f" n={r.n}"
        where += "" if r.k is None else f" k={r.k}"
        if r.status == "skipped":
            lines.append(f"SKIP {r.bound_id.value}{where} ({r.note})")
            continue
        lines.append(
            f"{label[r.status]} {r.bound_id.value}{where} "
            f"lhs={r.lhs!r} rhs={r.rhs!r} margin={r.margin!r} [{r.scale}]"
        )
    return lines
