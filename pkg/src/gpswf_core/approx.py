"""
## Spectral projection S_N f, Sobolev-type norms, error-bound shapes and deflection.

Why: approximation results are checked numerically. Coefficients <f, psi_n> come from a
Gauss-Jacobi rule, the weighted L2 error from the same rule, and the sup error from a
2001-point uniform grid.

Importables
    ProjectionReport, project, projection_rule
    jacobi_coefficients, sobolev_norm
    SobolevDecayReport, sobolev_decay_constants   empirical constant of the Sobolev-rate bound
    BoundShape, approx_error_bound_rhs       structural part of the error bounds (no C_1)
    DeflectionResult, deflection
    kernel_coefficient_identity              <c K_alpha(c .), psi_n> = 2 pi lambda_n psi_n(0)
    kernel_norm_sq                           its band-limited norm, 2 pi c ∫ω_alpha

Conventions: psi_n has unit L2([-1,1], ω_alpha) norm throughout; formulas written for the
lambda-normalized Psi_n = psi_n / sqrt(lambda_n) are converted where they are used.

*Tested by: tests/test_approx.py*
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from gpswf_core.basis import GpswfBasis, eval_psi_grid, psi_table
from gpswf_core.eigtri import QuadratureRule, gauss_jacobi
from gpswf_core.errors import DomainError, NumericalError, PreconditionError, ResolutionWarning
from gpswf_core.signals import Signal, sobolev_signal
from gpswf_core.specfun import jacobi_recurrence, weight_mass

logger = logging.getLogger(__name__)

SUP_GRID_POINTS = 2001
RULE_MARGIN = 64
MAX_RULE_SIZE = 8192
TAIL_COEFFICIENTS = 16
TAIL_RTOL = 1e-8
DESCENT_RTOL = 1e-12
DECAY_CONSTANT_RTOL = 0.2
_TINY = float(np.finfo(np.float64).tiny)


@dataclass(frozen=True)
class ProjectionReport:
    """
    S_N f for one signal.

    coefficients: <f, psi_n> for n = 0..N.
    err_weighted_l2: ||f - S_N f|| in L2(ω_alpha), same quadrature as the coefficients.
    err_sup_grid: max |f - S_N f| on 2001 uniform points of [-1, 1].
    bound_rhs: sqrt(lambda_N) ||f||, when lambda_N was supplied.
    """

    N: int
    coefficients: NDArray[np.float64] = field(repr=False)
    err_weighted_l2: float
    err_sup_grid: float
    signal_norm: float
    bound_rhs: float | None = None
    warnings: tuple[str, ...] = ()

    def as_row(self) -> dict[str, float | int | None]:
        return {
            "N": self.N,
            "err_weighted_l2": self.err_weighted_l2,
            "err_sup_grid": self.err_sup_grid,
            "signal_norm": self.signal_norm,
            "bound_rhs": self.bound_rhs,
        }


def projection_rule(basis: GpswfBasis, signal: Signal) -> QuadratureRule:
    """Gauss-Jacobi rule with max(2K, ceil(bandwidth) + K + 64) nodes (capped at 8192)."""
    K = basis.matrix_size
    m = max(2 * K, math.ceil(signal.bandwidth) + K + RULE_MARGIN)
    return gauss_jacobi(basis.alpha, min(m, MAX_RULE_SIZE))


def jacobi_coefficients(
    values: NDArray[np.float64], rule: QuadratureRule, kmax: int
) -> NDArray[np.float64]:
    """<f, P~_k> for k = 0..kmax from samples of f at the rule's nodes (streamed over k)."""
    a = jacobi_recurrence(kmax, rule.alpha)
    fw = values * rule.weights
    out = np.empty(kmax + 1)
    p_prev = np.full(rule.size, 1.0 / math.sqrt(weight_mass(rule.alpha)))
    out[0] = fw @ p_prev
    if kmax == 0:
        return out
    p = rule.nodes * p_prev / a[1]
    out[1] = fw @ p
    for k in range(1, kmax):
        p_prev, p = p, (rule.nodes * p - a[k] * p_prev) / a[k + 1]
        out[k + 1] = fw @ p
    return out


def _tail_message(coeffs: NDArray[np.float64], what: str) -> str | None:
    peak = float(np.max(np.abs(coeffs)))
    if peak == 0.0:
        return None
    tail = float(np.max(np.abs(coeffs[-TAIL_COEFFICIENTS:])))
    if tail > TAIL_RTOL * peak:
        return f"{what}: coefficient tail {tail / peak:.2e} of peak, quadrature under-resolved"
    return None


def _warn(message: str) -> None:
    logger.warning(message)
    warnings.warn(message, ResolutionWarning, stacklevel=3)


def project(
    basis: GpswfBasis,
    f: Signal,
    N: int,
    rule: QuadratureRule | None = None,
    *,
    lambda_n: float | None = None,
) -> ProjectionReport:
    """
    Project f onto span{psi_0..psi_N}.

    rule defaults to projection_rule(basis, f) and must have >= 2K nodes for the basis'
    alpha. A non-decaying Jacobi tail of f under the rule raises a ResolutionWarning and
    is recorded in the report.
    Raises: PreconditionError for N >= basis.count or a rule that is too small;
    DomainError for a rule built for another alpha.
    """
    if not 0 <= N < basis.count:
        raise PreconditionError(f"N={N} outside computed range 0..{basis.count - 1}")
    if rule is None:
        rule = projection_rule(basis, f)
    if rule.alpha != basis.alpha:
        raise DomainError(f"rule alpha {rule.alpha} != basis alpha {basis.alpha}")
    if rule.size < 2 * basis.matrix_size:
        raise PreconditionError(f"rule has {rule.size} nodes, need >= {2 * basis.matrix_size}")

    values = f(rule.nodes)
    notes: list[str] = []
    msg = _tail_message(jacobi_coefficients(values, rule, rule.size - 1), f.label)
    if msg:
        notes.append(msg)
        _warn(msg)

    psi = psi_table(basis, rule.nodes)[: N + 1]
    coeffs = psi @ (values * rule.weights)
    residual = values - coeffs @ psi
    err_l2 = math.sqrt(float(residual**2 @ rule.weights))
    norm = math.sqrt(float(values**2 @ rule.weights))

    grid = np.linspace(-1.0, 1.0, SUP_GRID_POINTS)
    recon = coeffs @ psi_table(basis, grid)[: N + 1]
    err_sup = float(np.max(np.abs(f(grid) - recon)))

    bound = None
    if lambda_n is not None:
        if not 0.0 <= lambda_n < 1.0:
            raise DomainError(f"lambda_N must be in [0, 1), got {lambda_n}")
        bound = math.sqrt(lambda_n) * norm
    return ProjectionReport(
        N=N,
        coefficients=coeffs,
        err_weighted_l2=err_l2,
        err_sup_grid=err_sup,
        signal_norm=norm,
        bound_rhs=bound,
        warnings=tuple(notes),
    )


def sobolev_norm(f: Signal, s: float, alpha: float, kmax: int, rule: QuadratureRule) -> float:
    """
    sqrt(Σ_{k<=kmax} <f, P~_k>^2 (1+k^2)^s), coefficients by quadrature.
    Raises: DomainError for s < 0 or a rule for another alpha; PreconditionError when the rule
    cannot integrate degree-kmax products exactly.
    """
    if s < 0.0:
        raise DomainError(f"s must be >= 0, got {s}")
    if rule.alpha != alpha:
        raise DomainError(f"rule alpha {rule.alpha} != {alpha}")
    if rule.size <= kmax:
        raise PreconditionError(f"rule has {rule.size} nodes, need > kmax = {kmax}")
    coeffs = jacobi_coefficients(f(rule.nodes), rule, kmax)
    msg = _tail_message(coeffs, f"{f.label} up to degree {kmax}")
    if msg:
        _warn(msg)
    k = np.arange(kmax + 1, dtype=np.float64)
    return math.sqrt(float(np.sum(coeffs**2 * (1.0 + k * k) ** s)))


def sobolev_decay_shape(N: int, s: float) -> float:
    """(1 + (N/2)^2)^{-s/2}."""
    return (1.0 + (N / 2.0) ** 2) ** (-s / 2.0)


@dataclass(frozen=True)
class SobolevDecayReport:
    """
    Empirical constant of ||f - S_N f|| <= C (1 + (N/2)^2)^{-s/2} ||f||_{H^s} for seeded
    Sobolev signals. One constant per seed: the geometric mean over Ns of the ratio.
    """

    s: float
    Ns: tuple[int, ...]
    seeds: tuple[int, ...]
    constants: NDArray[np.float64] = field(repr=False)

    @property
    def median(self) -> float:
        return float(np.median(self.constants))

    @property
    def spread(self) -> float:
        """max |C / median - 1| over seeds."""
        return float(np.max(np.abs(self.constants / self.median - 1.0)))

    @property
    def stable(self) -> bool:
        return self.spread <= DECAY_CONSTANT_RTOL


def sobolev_decay_constants(
    basis: GpswfBasis,
    s: float,
    seeds: tuple[int, ...],
    Ns: tuple[int, ...],
    kmax: int = 1000,
) -> SobolevDecayReport:
    """
    Per seed, project sobolev_signal(s, seed, kmax) once at max(Ns) and read the errors at
    every N in Ns off the captured energy (discrete Parseval on the projection rule).

    Raises: DomainError for empty seeds/Ns or s < 0; PreconditionError for N >= basis.count.
    """
    if not seeds or not Ns:
        raise DomainError("need at least one seed and one N")
    top = max(Ns)
    if min(Ns) < 0 or top >= basis.count:
        raise PreconditionError(f"Ns must lie in 0..{basis.count - 1}, got {Ns}")
    constants = np.empty(len(seeds))
    for i, seed in enumerate(seeds):
        f = sobolev_signal(s, seed, kmax)
        rule = projection_rule(basis, f)
        rep = project(basis, f, top, rule)
        norm_s = sobolev_norm(f, s, basis.alpha, rule.size - 1, rule)
        captured = np.cumsum(rep.coefficients**2)
        logs = []
        for N in Ns:
            err = math.sqrt(max(rep.signal_norm**2 - float(captured[N]), _TINY))
            logs.append(math.log(err / (sobolev_decay_shape(N, s) * norm_s)))
        constants[i] = math.exp(sum(logs) / len(logs))
    report = SobolevDecayReport(s=s, Ns=tuple(Ns), seeds=tuple(seeds), constants=constants)
    logger.info(
        "sobolev decay constant s=%g: median %.3g, spread %.1f%% over %d seeds",
        s,
        report.median,
        100.0 * report.spread,
        len(seeds),
    )
    return report


class BoundShape(StrEnum):
    """Structural parts of the approximation bounds, constants dropped."""

    APPROXX1 = "approxx1"  # sqrt(lambda_N) ||f||_alpha
    APPROXX2 = "approxx2"  # sqrt(lambda_N) chi_N^{1/2+a/2} ||f||_alpha
    APPROX1 = "approx1"  # sqrt(lambda_N) chi_N^{(1+a)/2} ||f||_{L2(R)}
    APPROX2 = "approx2"  # sqrt(lambda_N) chi_N^{1+a/2} ||f||_{L2(R)}


_CHI_EXPONENT = {
    BoundShape.APPROXX1: lambda a: 0.0,
    BoundShape.APPROXX2: lambda a: 0.5 + 0.5 * a,
    BoundShape.APPROX1: lambda a: 0.5 * (1.0 + a),
    BoundShape.APPROX2: lambda a: 1.0 + 0.5 * a,
}


def approx_error_bound_rhs(
    kind: BoundShape | str,
    lambda_n: float,
    chi_n: float,
    alpha: float,
    c: float,
    norm: float,
) -> float:
    """
    sqrt(lambda_N) chi_N^p norm with p fixed by `kind`. For ratio tests only: the bounds
    hold up to a constant C_1 that depends on alpha and is not known.
    """
    shape = BoundShape(kind)
    if not 0.0 < lambda_n < 1.0:
        raise DomainError(f"lambda_N must be in (0, 1), got {lambda_n}")
    if not chi_n > 0.0:
        raise DomainError(f"chi_N must be > 0, got {chi_n}")
    if c <= 0.0 or alpha < 0.0:
        raise DomainError("approximation bounds are stated for c > 0 and alpha >= 0")
    return math.sqrt(lambda_n) * chi_n ** _CHI_EXPONENT[shape](alpha) * norm


@dataclass(frozen=True)
class DeflectionResult:
    deflection: float
    bound: float
    case: Literal["saturated", "formula", "clamped"]

    @property
    def clamped(self) -> bool:
        return self.case == "clamped"

    def as_dict(self) -> dict[str, float | str]:
        return {"deflection": self.deflection, "bound": self.bound, "case": self.case}


def deflection(lambdas: NDArray[np.float64] | list[float], N: int, eps2: float) -> DeflectionResult:
    """
    Deflection of the eps-concentrated unit ball from span{psi_0..psi_{N-1}}:
        1                                       if 1 - eps2 <= lambda_N   ("saturated")
        (lambda_0 - (1-eps2))/(lambda_0 - lambda_N) otherwise             ("formula")
    A negative formula value (lambda_0 < 1 - eps2) is reported as 0 ("clamped").
    bound = eps2 / (1 - lambda_N); the value never exceeds max(1, bound).

    Raises: DomainError for eps2 outside (0, 1), N out of range, non-descending lambdas, or
    lambda_0 = lambda_N in the formula case. Ascents up to 1e-12 relative pass as roundoff;
    lambda_N >= 1 always saturates, with an infinite bound.
    """
    lam = np.asarray(lambdas, dtype=np.float64)
    if not 0.0 < eps2 < 1.0:
        raise DomainError(f"eps2 must be in (0, 1), got {eps2}")
    if not 0 <= N < lam.size:
        raise DomainError(f"need len(lambdas) > N, got {lam.size} <= {N}")
    if np.any(np.diff(lam) > DESCENT_RTOL * np.abs(lam[:-1])):
        raise DomainError("lambdas must be descending")
    lam0, lamN = float(lam[0]), float(lam[N])
    bound = eps2 / (1.0 - lamN) if lamN < 1.0 else math.inf
    threshold = 1.0 - eps2

    if threshold <= lamN:
        value, case = 1.0, "saturated"
    else:
        if lam0 == lamN:
            raise DomainError("degenerate spectrum: lambda_0 == lambda_N")
        value, case = (lam0 - threshold) / (lam0 - lamN), "formula"
        if value < 0.0:
            value, case = 0.0, "clamped"
    if value > max(1.0, bound):
        raise NumericalError(f"deflection {value!r} exceeds max(1, {bound!r})")
    return DeflectionResult(deflection=value, bound=bound, case=case)


def kernel_coefficient_identity(basis: GpswfBasis, n: int, lambda_n: float) -> float:
    """
    Exact projection coefficient of g = c K_alpha(c .) onto psi_n:
    <g, psi_n> = c mu_n^2 psi_n(0) = 2 pi lambda_n psi_n(0) (zero for odd n).
    """
    psi0 = float(eval_psi_grid(basis, n, np.array([0.0]))[0])
    return 2.0 * math.pi * lambda_n * psi0 if n % 2 == 0 else 0.0


def kernel_norm_sq(alpha: float, c: float) -> float:
    """
    Σ_n <g, psi_n>^2 / lambda_n for g = c K_alpha(c .), i.e. its squared band-limited norm.
    Equals 4 pi^2 Σ lambda_n psi_n(0)^2 = 4 pi^2 (c/2pi) K_alpha(0) = 2 pi c ∫ω_alpha.
    """
    return 2.0 * math.pi * c * weight_mass(alpha)
