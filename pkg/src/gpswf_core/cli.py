"""
CLI Orchestrator.

Tips:
- CLI does only argument parsing, flag validation (CliConfig) and one call per command into
  library code. Standard output carries data only; logs go to standard error.
- Every command output is a pure function of its flags (byte-identical reruns).

Commands:
  eig         spectral table n, chi, lambda, mu_abs, chi_lower, chi_upper
  eval        psi_n and psi_n' on a uniform grid (--points) or at given --x values
  project     projection errors of signal tokens for each N
  verify      bound suite; one PASS/FAIL/SKIP/INFO line per check, exit 2 on a violation
  deflection  {deflection, bound, case} for one (eps, N)
  experiment  YAML-configured run directory with artifacts and provenance


# calls

## from repo root:

gpswf-core eig --alpha 1 --c 50 --count 45 --format csv
gpswf-core verify --alpha 0 --c 5 --nmax 60
gpswf-core deflection --alpha 0 --c 10 --eps 0.1 --terms 12
python -m gpswf_core.cli experiment --config configs/example1.yaml --run-root ./.runs --run-id r0001

The experiment command must print:
    RUN_DIR: <path>

Exit codes: 0 success, 1 usage / validation / domain error, 2 verify found a violated bound.
"""

from __future__ import annotations

import argparse
import logging
import sys
from datetime import UTC, datetime
from pathlib import Path
from secrets import token_hex
from typing import Literal, NoReturn

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from gpswf_core.approx import deflection, project, projection_rule
from gpswf_core.basis import (
    GpswfParams,
    compute_basis,
    eval_psi_derivative_grid,
    eval_psi_grid,
)
from gpswf_core.bounds import suite_passed, verify_suite
from gpswf_core.config.runner import run_once
from gpswf_core.errors import GpswfError
from gpswf_core.export import render_csv, render_json, write_text
from gpswf_core.reports import (
    DEFLECTION_HEADER,
    EIG_HEADER,
    EVAL_HEADER,
    PROJECTION_HEADER,
    VERIFY_HEADER,
    deflection_row,
    eig_rows,
    eval_rows,
    projection_row,
    verify_lines,
    verify_rows,
)
from gpswf_core.signals import parse_signal_spec
from gpswf_core.spectrum import compute_spectrum, log_lambdas

logger = logging.getLogger("gpswf_core.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2


class CliConfig(BaseModel):
    """
    Validated flags of one invocation. Built from the argparse namespace before any compute.

    Strict: unknown keys are errors.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Literal["eig", "eval", "project", "verify", "deflection"]
    alpha: float = Field(gt=-1.0, allow_inf_nan=False)
    c: float = Field(ge=0.0, allow_inf_nan=False)
    format: Literal["csv", "json", "text"] = "csv"
    out: Path | None = None

    count: int = Field(default=20, ge=1)
    n: int = Field(default=0, ge=0)
    points: int = Field(default=201, ge=2)
    x: tuple[float, ...] | None = None
    signal: str | None = None
    N: tuple[int, ...] = ()
    seed: int | None = None
    nmax: int = Field(default=20, ge=0)
    eps: float | None = Field(default=None, gt=0.0, lt=1.0)
    eps2: float | None = Field(default=None, gt=0.0, lt=1.0)
    terms: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _command_needs(self) -> CliConfig:
        if self.command == "project" and (self.signal is None or not self.N):
            raise ValueError("project needs --signal and --N")
        if self.command == "project" and any(v < 0 for v in self.N):
            raise ValueError("--N values must be >= 0")
        if self.command == "deflection" and self.eps2 is None:
            raise ValueError("deflection needs --eps or --eps2")
        if self.x is not None and any(not -1.0 <= v <= 1.0 for v in self.x):
            raise ValueError("--x values must lie in [-1, 1]")
        if self.format == "text" and self.command != "verify":
            raise ValueError("--format text is only available for verify")
        return self

    def params(self) -> GpswfParams:
        return GpswfParams(alpha=self.alpha, c=self.c)


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit 1 (argparse default is 2, reserved for verify)."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_run_id() -> str:
    """Creates a unique enough run_id for CI/local. Avoids collisions on fast reruns."""
    ts = datetime.now(tz=UTC).strftime("%Y%m%d_%H%M%S")
    return f"{ts}_{token_hex(3)}"  # e.g., 20260104_081530_a1b2c3


def _document(cfg: CliConfig, results: list[dict[str, object]]) -> str:
    return render_json({"params": {"alpha": cfg.alpha, "c": cfg.c}, "results": results})


def _emit(cfg: CliConfig, header: tuple[str, ...], rows: list[dict[str, object]]) -> None:
    text = render_csv(header, rows) if cfg.format == "csv" else _document(cfg, rows)
    write_text(text, cfg.out)


def _cmd_eig(cfg: CliConfig) -> int:
    basis = compute_basis(cfg.params(), cfg.count - 1)
    _emit(cfg, EIG_HEADER, eig_rows(basis, compute_spectrum(basis)))
    return EXIT_OK


def _cmd_eval(cfg: CliConfig) -> int:
    basis = compute_basis(cfg.params(), cfg.n)
    x = np.asarray(cfg.x, dtype=np.float64) if cfg.x else np.linspace(-1.0, 1.0, cfg.points)
    psi = eval_psi_grid(basis, cfg.n, x)
    dpsi = eval_psi_derivative_grid(basis, cfg.n, x)
    _emit(cfg, EVAL_HEADER, eval_rows(x, psi, dpsi))
    return EXIT_OK


def _cmd_project(cfg: CliConfig) -> int:
    assert cfg.signal is not None  # checked by CliConfig
    params = cfg.params()
    basis = compute_basis(params, max(cfg.N))
    lam = np.exp(log_lambdas(basis))
    signal = parse_signal_spec(cfg.signal, alpha=params.alpha, c=params.c, seed=cfg.seed)
    rule = projection_rule(basis, signal)
    rows = [
        projection_row(cfg.signal, project(basis, signal, N, rule, lambda_n=float(lam[N])))
        for N in sorted(set(cfg.N))
    ]
    _emit(cfg, PROJECTION_HEADER, rows)
    return EXIT_OK


def _cmd_verify(cfg: CliConfig) -> int:
    reports = verify_suite(cfg.alpha, cfg.c, cfg.nmax)
    logger.info("verify alpha=%g c=%g: %d checks", cfg.alpha, cfg.c, len(reports))
    if cfg.format == "text":
        write_text("".join(f"{line}\n" for line in verify_lines(reports)), cfg.out)
    else:
        _emit(cfg, VERIFY_HEADER, verify_rows(reports))
    return EXIT_OK if suite_passed(reports) else EXIT_VIOLATION


def _cmd_deflection(cfg: CliConfig) -> int:
    assert cfg.eps2 is not None  # checked by CliConfig
    basis = compute_basis(cfg.params(), cfg.terms)
    lam = np.exp(log_lambdas(basis))
    row = deflection_row(cfg.eps2, cfg.terms, deflection(lam, cfg.terms, cfg.eps2))
    if cfg.format == "csv":
        write_text(render_csv(DEFLECTION_HEADER, [row]), cfg.out)
    else:
        write_text(render_json({"params": {"alpha": cfg.alpha, "c": cfg.c}, **row}), cfg.out)
    return EXIT_OK


_COMMANDS = {
    "eig": _cmd_eig,
    "eval": _cmd_eval,
    "project": _cmd_project,
    "verify": _cmd_verify,
    "deflection": _cmd_deflection,
}


def _cmd_experiment(args: argparse.Namespace) -> int:
    """Runs the experiment, and organizes run_dir for logging purposes."""
    run_dir = run_once(
        config_path=Path(args.config),
        run_root=Path(args.run_root),
        run_id=str(args.run_id),
        argv=sys.argv,  # capture exact invocation
    )
    # single line parsable by tests/tools.
    print(f"RUN_DIR: {run_dir}")
    return EXIT_OK


def _to_config(args: argparse.Namespace) -> CliConfig:
    eps = getattr(args, "eps", None)
    eps2 = getattr(args, "eps2", None) if eps is None else eps**2
    raw = {
        "command": args.cmd,
        "alpha": args.alpha,
        "c": args.c,
        "format": args.format,
        "out": args.out,
        "count": getattr(args, "count", 20),
        "n": getattr(args, "n", 0),
        "points": getattr(args, "points", 201),
        "x": getattr(args, "x", None),
        "signal": getattr(args, "signal", None),
        "N": tuple(getattr(args, "N", None) or ()),
        "seed": getattr(args, "seed", None),
        "nmax": getattr(args, "nmax", 20),
        "eps": getattr(args, "eps", None),
        "eps2": eps2,
        "terms": getattr(args, "terms", 0),
    }
    return CliConfig.model_validate(raw)


def _family_parser() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--alpha", type=float, required=True, help="Weight exponent, alpha > -1.")
    p.add_argument("--c", type=float, required=True, help="Bandwidth, c >= 0.")
    p.add_argument("--out", type=Path, default=None, help="Output file (default: stdout).")
    return p


def build_parser() -> argparse.ArgumentParser:
    """Builds the parser for organization."""
    common = _Parser(add_help=False)
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level on stderr.",
    )
    family = _family_parser()

    p = _Parser(prog="gpswf-core")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("eig", parents=[common, family], help="Spectral table.")
    s.add_argument("--count", type=int, default=20, help="Number of indices n = 0..count-1.")
    s.add_argument("--format", choices=["csv", "json"], default="csv")

    s = sub.add_parser("eval", parents=[common, family], help="Evaluate psi_n and psi_n'.")
    s.add_argument("--n", type=int, required=True, help="Function index.")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--points", type=int, default=201, help="Uniform grid size on [-1, 1].")
    g.add_argument("--x", type=float, nargs="+", default=None, help="Explicit points.")
    s.add_argument("--format", choices=["csv", "json"], default="csv")

    s = sub.add_parser("project", parents=[common, family], help="Projection errors.")
    s.add_argument(
        "--signal",
        required=True,
        help="sinc:a=40 | kernel | sobolev:s=1.0,seed=42,kmax=1000 | file:PATH",
    )
    s.add_argument("--N", type=int, nargs="+", required=True, help="Truncation indices.")
    s.add_argument("--seed", type=int, default=None, help="Default seed for sobolev signals.")
    s.add_argument("--format", choices=["csv", "json"], default="csv")

    s = sub.add_parser("verify", parents=[common, family], help="Bound verification suite.")
    s.add_argument("--nmax", type=int, default=20, help="Largest index checked.")
    s.add_argument("--format", choices=["text", "csv", "json"], default="text")

    s = sub.add_parser("deflection", parents=[common, family], help="Deflection for (eps, N).")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--eps", type=float, default=None, help="Concentration tolerance eps.")
    g.add_argument("--eps2", type=float, default=None, help="eps squared.")
    s.add_argument("--terms", type=int, required=True, help="Truncation N.")
    s.add_argument("--format", choices=["csv", "json"], default="json")

    s = sub.add_parser("experiment", parents=[common], help="YAML-configured experiment run.")
    s.add_argument("--config", required=True, help="Path to YAML config.")
    s.add_argument("--run-root", required=True, help="Root directory where runs are created.")
    s.add_argument(
        "--run-id", default=_default_run_id(), help="Run id prefix (defaults to unique UTC id)."
    )

    return p


def main(argv: list[str] | None = None) -> int:
    """High logic orchestrator."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=ns.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        if ns.cmd == "experiment":
            return _cmd_experiment(ns)
        cfg = _to_config(ns)
        return _COMMANDS[cfg.command](cfg)
    except ValidationError as e:
        print(f"gpswf-core: invalid arguments\n{e}", file=sys.stderr)
        return EXIT_USAGE
    except (GpswfError, FileExistsError, FileNotFoundError) as e:
        print(f"gpswf-core: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
