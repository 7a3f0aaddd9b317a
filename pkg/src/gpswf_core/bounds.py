"""
## Explicit eigenvalue / coefficient bounds and the verification suite that checks them.

Why: every closed-form inequality about chi_n, mu_n, lambda_n, beta_k^n and psi_n gets a
function for its right-hand side plus a machine-checkable comparison against a computed
family. Decay bounds are compared as natural logarithms, so they stay decidable when
lambda_n is far below the double range.

Importables
    ### formulas
    chi_bounds, improved_chi_constant
    mu_bound / log_mu_bound, lambda_bound / log_lambda_bound   (n > (ec+1)/2)
    legacy_lambda_bound / log_legacy_lambda_bound               (bn > c, 0 < b < 4/e)
    tail_decay_estimate, log_tail_decay_estimate                display only (INFO)
    beta_bound_constant, beta_region_constant, log_beta_bound
    local_estimate_check                                        sup vs A^2 vs 2 alpha + 1
    SOBOLEV_DECAY reports (info)                                 empirical constant, 8 seeds

    ### reporting
    BoundId, BoundReport, verify_suite, suite_passed

Tolerance: an inequality lhs <= rhs fails only when lhs > rhs + 1e-12 max(1, |rhs|).
Report order: bound_id (declaration order), then n, then k.

*Tested by: tests/test_bounds.py*
"""

from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict
from scipy import optimize, special

from gpswf_core.approx import sobolev_decay_constants
from gpswf_core.basis import (
    GpswfBasis,
    GpswfParams,
    compute_basis,
    eval_psi,
    eval_psi_derivative_grid,
    eval_psi_grid,
)
from gpswf_core.errors import DomainError, PreconditionError
from gpswf_core.spectrum import log_lambdas, log_mus, trace_identity

logger = logging.getLogger(__name__)

REL_TOL = 1e-12
TRACE_RTOL = 1e-8
LOCAL_GRID_POINTS = 4097
LOCAL_Q_LIMIT = 3.0 / 17.0
LEGACY_B = 1.0
MONOTONICITY_STEP = 0.5
MIN_TREND_POINTS = 4
SOBOLEV_S = 1.0
SOBOLEV_SEEDS = tuple(range(8))

Status = Literal["pass", "fail", "skipped", "info"]
Scale = Literal["linear", "log"]


class BoundId(StrEnum):
    """Declaration order is report order."""

    CHI_LOWER = "chi_lower"
    CHI_UPPER = "chi_upper"
    CHI_IMPROVED = "chi_improved"
    MU_DECAY = "mu_decay"
    LAMBDA_DECAY = "lambda_decay"
    LEGACY_LAMBDA = "legacy_lambda"
    TAIL_DECAY = "tail_decay"
    LOCAL_ESTIMATE = "local_estimate"
    LOCAL_AMPLITUDE = "local_amplitude"
    LOCAL_SUP_AMPLITUDE = "local_sup_amplitude"
    BETA_BOUND = "beta_bound"
    BETA_DECAY_TREND = "beta_decay_trend"
    ALPHA_MONOTONICITY = "alpha_monotonicity"
    TRACE_IDENTITY = "trace_identity"
    SOBOLEV_DECAY = "sobolev_decay"


_ORDER = {b: i for i, b in enumerate(BoundId)}


class BoundReport(BaseModel):
    """
    One checked inequality lhs <= rhs.

    scale="log": lhs/rhs are natural logarithms of the compared quantities.
    satisfied is None for skipped and info reports.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    bound_id: BoundId
    n: int | None = None
    k: int | None = None
    lhs: float = 0.0
    rhs: float = 0.0
    margin: float = 0.0
    satisfied: bool | None = None
    status: Status = "skipped"
    scale: Scale = "linear"
    note: str = ""


def _check(
    bound_id: BoundId,
    lhs: float,
    rhs: float,
    *,
    n: int | None = None,
    k: int | None = None,
    scale: Scale = "linear",
    note: str = "",
) -> BoundReport:
    ok = bool(lhs <= rhs + REL_TOL * max(1.0, abs(rhs))) if math.isfinite(rhs) else lhs <= rhs
    return BoundReport(
        bound_id=bound_id,
        n=n,
        k=k,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        satisfied=ok,
        status="pass" if ok else "fail",
        scale=scale,
        note=note,
    )


def _skipped(bound_id: BoundId, note: str, *, n: int | None = None) -> BoundReport:
    return BoundReport(bound_id=bound_id, n=n, status="skipped", note=note)


# --- chi ---------------------------------------------------------------------------


class ChiBounds(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    lower_classical: float
    lower_improved: float | None
    upper: float


def improved_chi_constant(alpha: float) -> float:
    """C_alpha = 2(2a+1)^2 + 1 - 2(2a+1) sqrt(1 + (2a+1)^2); 3 - 2 sqrt(2) at alpha = 0."""
    t = 2.0 * alpha + 1.0
    return 2.0 * t * t + 1.0 - 2.0 * t * math.sqrt(1.0 + t * t)


def _improved_applies(alpha: float, c: float, chi: float) -> bool:
    return 0.0 <= alpha <= 0.25 and c > 0.0 and chi > 0.0 and c * c / chi < LOCAL_Q_LIMIT


def chi_bounds(n: int, alpha: float, c: float, chi: float | None = None) -> ChiBounds:
    """
    n(n+2a+1) <= chi_n <= n(n+2a+1) + c^2, plus n(n+2a+1) + C_alpha c^2 when
    0 <= alpha <= 1/4 and q = c^2/chi_n < 3/17. Without a computed chi the classical lower
    bound stands in for it (q is then over-estimated, never under-estimated).
    """
    if alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    if n < 0 or c < 0.0:
        raise DomainError("chi_bounds needs n >= 0 and c >= 0")
    base = n * (n + 2.0 * alpha + 1.0)
    improved = None
    if _improved_applies(alpha, c, base if chi is None else chi):
        improved = base + improved_chi_constant(alpha) * c * c
    return ChiBounds(lower_classical=base, lower_improved=improved, upper=base + c * c)


# --- mu / lambda decay ---------------------------------------------------------------


def _check_decay_region(n: int, c: float) -> None:
    if c <= 0.0:
        raise DomainError(f"decay bounds need c > 0, got {c}")
    if not n > (math.e * c + 1.0) / 2.0:
        raise DomainError(f"decay bounds need n > (ec+1)/2 = {(math.e * c + 1.0) / 2.0:.6g}")


def _log_k_alpha(alpha: float) -> float:
    """log of (2/e)^{(3+a)/2} pi^{5/4} Γ(a+1)^{1/2}."""
    return (
        0.5 * (3.0 + alpha) * math.log(2.0 / math.e)
        + 1.25 * math.log(math.pi)
        + 0.5 * float(special.gammaln(alpha + 1.0))
    )


def k_alpha(alpha: float) -> float:
    return math.exp(_log_k_alpha(alpha))


def big_k_alpha(alpha: float) -> float:
    """(pi^{3/2}/2) (2/e)^{a+3} Γ(a+1); equals (1/2pi) k_alpha^2."""
    return math.pi**1.5 / 2.0 * (2.0 / math.e) ** (alpha + 3.0) * math.gamma(alpha + 1.0)


def log_mu_bound(n: int, alpha: float, c: float) -> float:
    _check_decay_region(n, c)
    if alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    r = (2.0 * n - 1.0) / (math.e * c)
    return (
        _log_k_alpha(alpha)
        - 0.5 * (alpha + 3.0) * math.log(c)
        - math.log(math.log(r))
        - (n + 0.5 * (alpha + 1.0)) * math.log(r)
    )


def mu_bound(n: int, alpha: float, c: float) -> float:
    """
    k_alpha / [c^{(a+3)/2} log((2n-1)/(ec))] (ec/(2n-1))^{n+(a+1)/2}.
    Raises DomainError unless c > 0 and n > (ec+1)/2.
    """
    return math.exp(log_mu_bound(n, alpha, c))


def log_lambda_bound(n: int, alpha: float, c: float) -> float:
    _check_decay_region(n, c)
    if alpha <= 0.0:
        return math.log(c / (2.0 * math.pi)) + 2.0 * log_mu_bound(n, alpha, c)
    r = (2.0 * n - 1.0) / (math.e * c)
    return (
        math.log(big_k_alpha(alpha))
        - (alpha + 2.0) * math.log(c)
        - 2.0 * math.log(math.log(r))
        - (2.0 * n + alpha + 1.0) * math.log(r)
    )


def lambda_bound(n: int, alpha: float, c: float) -> float:
    """
    K_alpha / [c^{a+2} log^2((2n-1)/(ec))] (ec/(2n-1))^{2n+a+1} for alpha > 0;
    (c/2pi) mu_bound^2 otherwise (the same expression, stated for alpha > -1).
    """
    return math.exp(log_lambda_bound(n, alpha, c))


def log_legacy_lambda_bound(n: int, c: float, b: float = LEGACY_B) -> float:
    if not 0.0 < b < 4.0 / math.e:
        raise DomainError(f"b must be in (0, 4/e), got {b}")
    if not b * n > c:
        raise DomainError(f"legacy bound needs b n > c (b={b}, n={n}, c={c})")
    return -2.0 * n * math.log(b * n / c)


def legacy_lambda_bound(n: int, c: float, b: float = LEGACY_B) -> float:
    """e^{-2n log(bn/c)}; the threshold index beyond which it holds is not explicit."""
    return math.exp(log_legacy_lambda_bound(n, c, b))


def log_tail_decay_estimate(n: int, alpha: float, c: float, constant: float = 1.0) -> float:
    if c <= 0.0 or constant <= 0.0:
        raise DomainError("tail decay estimate needs c > 0 and a positive constant")
    arg = (4.0 * n + 4.0 * alpha + 2.0) / (math.e * c)
    return math.log(constant) - (2.0 * n + 1.0) * math.log(arg) - constant * c * c


def tail_decay_estimate(n: int, alpha: float, c: float, constant: float = 1.0) -> float:
    """
    C exp(-(2n+1) [log((4n+4a+2)/(ec)) + C c^2/(2n+1)]), with C a caller-chosen stand-in for
    an existential constant. Shape only; the suite reports it as INFO.
    """
    return math.exp(log_tail_decay_estimate(n, alpha, c, constant))


# --- beta coefficients -------------------------------------------------------------


def beta_bound_constant(alpha: float) -> float:
    """2^a (3/2)^{3/4} (3/2 + 2a)^{3/4+a} / e^{2a+3/2}."""
    return (
        2.0**alpha
        * 1.5**0.75
        * (1.5 + 2.0 * alpha) ** (0.75 + alpha)
        / math.exp(2.0 * alpha + 1.5)
    )


def beta_region_constant(alpha: float) -> float:
    """A = B with A^2 = 2.18 for 0 <= alpha <= 1/4, else 2.8."""
    return math.sqrt(2.18 if 0.0 <= alpha <= 0.25 else 2.8)


def log_beta_bound(k: int, chi: float, log_mu_abs: float, alpha: float, c: float) -> float:
    """log of C_alpha (2 sqrt(chi_n)/c)^k |mu_n|."""
    return (
        math.log(beta_bound_constant(alpha))
        + k * math.log(2.0 * math.sqrt(chi) / c)
        + log_mu_abs
    )


# --- local estimate ------------------------------------------------------------------


class LocalEstimate(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int
    q: float
    sup_value: float
    argmax: float
    amplitude_sq: float
    bound: float


def local_estimate_applies(alpha: float, c: float, chi: float) -> bool:
    return 0.0 <= alpha <= 0.25 and c > 0.0 and 0.0 < c * c / chi < LOCAL_Q_LIMIT


def local_estimate_check(basis: GpswfBasis, n: int) -> LocalEstimate:
    """
    sup_{[0,1]} sqrt((1-x^2)(1-qx^2)) ω_alpha(x) psi_n(x)^2 on a 4097-point grid, refined by
    golden-section search around the grid maximum; bound 2 alpha + 1, and
    A^2 = psi_n(0)^2 + psi_n'(0)^2 / chi_n with psi' by term-wise differentiation.

    Raises: PreconditionError unless 0 <= alpha <= 1/4 and 0 < q = c^2/chi_n < 3/17.
    """
    chi = float(basis.chi[n])
    alpha, c = basis.alpha, basis.c
    if not local_estimate_applies(alpha, c, chi):
        raise PreconditionError(
            f"local estimate needs 0 <= alpha <= 1/4 and 0 < c^2/chi_n < 3/17 (n={n})"
        )
    q = c * c / chi

    def weighted(x: np.ndarray, values: np.ndarray) -> np.ndarray:
        one = np.clip(1.0 - x * x, 0.0, None)
        return np.sqrt(one * (1.0 - q * x * x)) * one**alpha * values * values

    grid = np.linspace(0.0, 1.0, LOCAL_GRID_POINTS)
    profile = weighted(grid, eval_psi_grid(basis, n, grid))
    j = int(np.argmax(profile))
    sup_value, argmax = float(profile[j]), float(grid[j])
    if 0 < j < grid.size - 1:

        def neg(x: float) -> float:
            xx = min(max(x, 0.0), 1.0)
            return -float(weighted(np.array([xx]), np.array([eval_psi(basis, n, xx)]))[0])

        try:
            res = optimize.minimize_scalar(
                neg, bracket=(grid[j - 1], grid[j], grid[j + 1]), method="golden"
            )
            if -res.fun > sup_value and 0.0 <= res.x <= 1.0:
                sup_value, argmax = float(-res.fun), float(res.x)
        except ValueError:
            logger.debug("golden refinement rejected the bracket at n=%d", n)

    psi0 = eval_psi(basis, n, 0.0)
    dpsi0 = float(eval_psi_derivative_grid(basis, n, np.array([0.0]))[0])
    return LocalEstimate(
        n=n,
        q=q,
        sup_value=sup_value,
        argmax=argmax,
        amplitude_sq=psi0 * psi0 + dpsi0 * dpsi0 / chi,
        bound=2.0 * alpha + 1.0,
    )


# --- suite ---------------------------------------------------------------------------


def _chi_checks(basis: GpswfBasis) -> list[BoundReport]:
    out: list[BoundReport] = []
    for n, chi in enumerate(basis.chi):
        chi = float(chi)
        b = chi_bounds(n, basis.alpha, basis.c, chi)
        out.append(_check(BoundId.CHI_LOWER, b.lower_classical, chi, n=n))
        out.append(_check(BoundId.CHI_UPPER, chi, b.upper, n=n))
        if b.lower_improved is not None:
            out.append(_check(BoundId.CHI_IMPROVED, b.lower_improved, chi, n=n))
    return out


def _decay_checks(
    basis: GpswfBasis, log_mu: NDArray[np.float64], log_lam: NDArray[np.float64]
) -> list[BoundReport]:
    alpha, c = basis.alpha, basis.c
    out: list[BoundReport] = []
    first = math.floor((math.e * c + 1.0) / 2.0) + 1
    if first >= basis.count:
        out.append(_skipped(BoundId.MU_DECAY, f"no n > (ec+1)/2 up to {basis.count - 1}"))
    for n in range(first, basis.count):
        out.append(
            _check(BoundId.MU_DECAY, float(log_mu[n]), log_mu_bound(n, alpha, c), n=n, scale="log")
        )
    if alpha <= 0.0:
        out.append(_skipped(BoundId.LAMBDA_DECAY, "stated for alpha > 0"))
    else:
        for n in range(first, basis.count):
            out.append(
                _check(
                    BoundId.LAMBDA_DECAY,
                    float(log_lam[n]),
                    log_lambda_bound(n, alpha, c),
                    n=n,
                    scale="log",
                )
            )

    if alpha < 0.0:
        out.append(_skipped(BoundId.LEGACY_LAMBDA, "stated for alpha >= 0"))
    else:
        start = max(math.ceil(2.0 * c), math.floor(c / LEGACY_B) + 1)
        for n in range(start, basis.count):
            out.append(
                _check(
                    BoundId.LEGACY_LAMBDA,
                    float(log_lam[n]),
                    log_legacy_lambda_bound(n, c),
                    n=n,
                    scale="log",
                )
            )

    if 0.0 < alpha < 1.5:
        for n in range(first, basis.count):
            est = log_tail_decay_estimate(n, alpha, c)
            out.append(
                BoundReport(
                    bound_id=BoundId.TAIL_DECAY,
                    n=n,
                    lhs=float(log_lam[n]),
                    rhs=est,
                    margin=est - float(log_lam[n]),
                    status="info",
                    scale="log",
                    note="shape only, constants unspecified",
                )
            )
    return out


def _local_checks(basis: GpswfBasis) -> list[BoundReport]:
    out: list[BoundReport] = []
    for n in range(basis.count):
        if not local_estimate_applies(basis.alpha, basis.c, float(basis.chi[n])):
            continue
        est = local_estimate_check(basis, n)
        out.append(_check(BoundId.LOCAL_ESTIMATE, est.sup_value, est.bound, n=n))
        out.append(_check(BoundId.LOCAL_AMPLITUDE, est.amplitude_sq, est.bound, n=n))
        out.append(_check(BoundId.LOCAL_SUP_AMPLITUDE, est.sup_value, est.amplitude_sq, n=n))
    if not out:
        out.append(_skipped(BoundId.LOCAL_ESTIMATE, "needs 0 <= alpha <= 1/4, q < 3/17"))
    return out


def _beta_checks(
    basis: GpswfBasis, log_mu: NDArray[np.float64], log_lam: NDArray[np.float64]
) -> list[BoundReport]:
    # bounds are stated for psi_n with squared norm lambda_n: beta scales by sqrt(lambda_n)
    alpha, c = basis.alpha, basis.c
    log_scale = 0.5 * log_lam
    ab = beta_region_constant(alpha)
    out: list[BoundReport] = []
    for n in range(basis.count):
        if n < c * ab:
            continue
        chi = float(basis.chi[n])
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(basis.beta[n])) + log_scale[n]
        for k in range(n % 2, math.floor(n / ab) + 1, 2):
            rhs = log_beta_bound(k, chi, float(log_mu[n]), alpha, c)
            out.append(_check(BoundId.BETA_BOUND, float(logs[k]), rhs, n=n, k=k, scale="log"))
    if not out:
        out.append(_skipped(BoundId.BETA_BOUND, "no n >= A c in range"))

    # log|beta_k^n| should fall with n once n >= (75 + 46a)^0.7 c and k <= n/1.7
    n_start = math.ceil((75.0 + 46.0 * alpha) ** 0.7 * c) if alpha > -1.0 else basis.count
    trend: list[BoundReport] = []
    for k in range(basis.count):
        ns = [n for n in range(max(n_start, k), basis.count) if (n - k) % 2 == 0 and k <= n / 1.7]
        if len(ns) < MIN_TREND_POINTS:
            continue
        with np.errstate(divide="ignore"):
            y = np.log(np.abs(basis.beta[ns, k])) + log_scale[ns]
        keep = np.isfinite(y)
        if int(keep.sum()) < MIN_TREND_POINTS:
            continue
        slope = float(np.polyfit(np.asarray(ns, dtype=np.float64)[keep], y[keep], 1)[0])
        trend.append(_check(BoundId.BETA_DECAY_TREND, slope, 0.0, k=k, note="slope in n"))
    if not trend:
        trend.append(_skipped(BoundId.BETA_DECAY_TREND, "fewer than 4 points in the region"))
    return out + trend


def _monotonicity_checks(
    params: GpswfParams, nmax: int, log_lam: NDArray[np.float64]
) -> list[BoundReport]:
    if params.alpha < 0.0:
        return [_skipped(BoundId.ALPHA_MONOTONICITY, "stated for alpha >= 0")]
    other = GpswfParams(alpha=params.alpha + MONOTONICITY_STEP, c=params.c)
    other_lam = log_lambdas(compute_basis(other, nmax))
    note = f"alpha'={other.alpha:g} vs alpha={params.alpha:g}"
    return [
        _check(
            BoundId.ALPHA_MONOTONICITY,
            float(other_lam[n]),
            float(log_lam[n]),
            n=n,
            scale="log",
            note=note,
        )
        for n in range(nmax + 1)
    ]


def _trace_check(params: GpswfParams) -> BoundReport:
    rep = trace_identity(params)
    return _check(
        BoundId.TRACE_IDENTITY,
        rep.rel_gap,
        TRACE_RTOL,
        note=f"computed={rep.computed!r} analytic={rep.analytic!r}",
    )


def _sobolev_checks(basis: GpswfBasis) -> list[BoundReport]:
    # info only: the exponential tail of the bound dominates until N is well past c
    N = basis.count - 1
    rep = sobolev_decay_constants(basis, SOBOLEV_S, SOBOLEV_SEEDS, (N,))
    note = f"s={SOBOLEV_S:g} median={rep.median:.3g} spread={rep.spread:.1%} over seeds"
    return [
        BoundReport(
            bound_id=BoundId.SOBOLEV_DECAY,
            n=N,
            lhs=float(const),
            rhs=1.0,
            margin=1.0 - float(const),
            status="info",
            note=f"seed={seed} {note}",
        )
        for seed, const in zip(rep.seeds, rep.constants, strict=True)
    ]


def verify_suite(alpha: float, c: float, nmax: int) -> list[BoundReport]:
    """
    Run every applicable check for the family (alpha, c) over n = 0..nmax.

    Inapplicable checks come back with status "skipped"; the decay-shape estimate comes
    back as "info". Deterministic: identical inputs give identical reports.
    """
    if nmax < 0:
        raise DomainError(f"nmax must be >= 0, got {nmax}")
    params = GpswfParams(alpha=alpha, c=c)
    basis = compute_basis(params, nmax)
    reports = _chi_checks(basis)

    if c > 0.0:
        log_mu = log_mus(basis)
        log_lam = log_lambdas(basis)
        reports += _decay_checks(basis, log_mu, log_lam)
        reports += _local_checks(basis)
        reports += _beta_checks(basis, log_mu, log_lam)
        reports += _monotonicity_checks(params, nmax, log_lam)
        reports.append(_trace_check(params))
        reports += _sobolev_checks(basis)
    else:
        for bid in (
            BoundId.MU_DECAY,
            BoundId.LAMBDA_DECAY,
            BoundId.LEGACY_LAMBDA,
            BoundId.LOCAL_ESTIMATE,
            BoundId.BETA_BOUND,
            BoundId.ALPHA_MONOTONICITY,
            BoundId.TRACE_IDENTITY,
            BoundId.SOBOLEV_DECAY,
        ):
            reports.append(_skipped(bid, "c = 0"))

    reports.sort(
        key=lambda r: (_ORDER[r.bound_id], -1 if r.n is None else r.n, -1 if r.k is None else r.k)
    )
    for r in reports:
        logger.debug("%s n=%s k=%s %s", r.bound_id.value, r.n, r.k, r.status)
    return reports


def suite_passed(reports: list[BoundReport]) -> bool:
    """Conjunction over applicable checks (skipped and info never fail a suite)."""
    return all(r.status != "fail" for r in reports)
