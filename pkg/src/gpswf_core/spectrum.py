"""
## Eigenvalues mu_n (finite Fourier transform) and lambda_n (concentration) from a basis.

Why: chi_n and beta alone do not give the spectra the bounds and projections are about;
mu_n comes from the eigen-relation F_c psi_n = mu_n psi_n and lambda_n = (c / 2 pi) |mu_n|^2.

How mu_n is computed
    mu_0: the eigen-relation at a reference point x*, with F_c of each Jacobi polynomial in
          Bessel form:
              F_c P~_k (x) = i^k sqrt(pi) (2/(cx))^{a+1/2} Γ(k+a+1)/Γ(k+1) J_{k+a+1/2}(cx)/sqrt(h_k)
    n >= 1: |mu_{n+1}| = c |mu_n| |<t psi_n, psi_{n+1}>| / |<psi'_{n+1}, psi_n>|
          (differentiate the eigen-relation and pair with psi_n). Both inner products are
          polynomial and exact under a K-node Gauss-Jacobi rule, so the chain keeps relative
          accuracy long after the Bessel sum has cancelled down to roundoff.
    The Bessel sum cross-checks every |mu_n| it can still resolve, and the phase i^n is
    asserted from the sign of each chain ratio. Magnitudes are carried as log|mu_n|.

Importables
    SpectralTriple, compute_mu, compute_lambda, compute_spectrum
    nystrom_lambda              dense brute-force oracle for lambda_n
    TraceReport, trace_identity Σ lambda_n = (c/2pi) (∫ω_alpha)^2
    fourier_identity_residual   max error of (1/mu_n) ∫ psi_n ω e^{ictx} dt vs psi_n(x)

*Tested by: tests/test_spectrum.py*
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict
from scipy import linalg, special

from gpswf_core.basis import (
    GpswfBasis,
    GpswfParams,
    compute_basis,
    eval_psi_grid,
    psi_deriv_table,
    psi_table,
)
from gpswf_core.eigtri import gauss_jacobi
from gpswf_core.errors import DomainError, NumericalError, PreconditionError
from gpswf_core.specfun import BESSEL_MAX_ORDER, jacobi_norm_h, kernel_K, weight_mass

logger = logging.getLogger(__name__)

REFERENCE_GRID_POINTS = 257
MIN_BESSEL_ARGUMENT = 1e-6
# direct Bessel sums are trusted while cancellation leaves at least this relative accuracy
_DIRECT_RESOLVED = 1e-8
_MAGNITUDE_RTOL = 1e-6
TRACE_TAIL = 1e-15
# largest double below 1, as a log
_LOG_LAMBDA_CEILING = math.log(float(np.nextafter(1.0, 0.0)))


@dataclass(frozen=True)
class SpectralTriple:
    """Per-index spectral record; mu_n = i^phase_power |mu_n|."""

    n: int
    chi: float
    mu_abs: float
    log_mu_abs: float
    lambda_: float
    log_lambda: float
    phase_power: int

    def as_row(self) -> dict[str, float | int]:
        return {
            "n": self.n,
            "chi": self.chi,
            "lambda": self.lambda_,
            "mu_abs": self.mu_abs,
            "log_mu_abs": self.log_mu_abs,
            "phase_power": self.phase_power,
        }


def _reference_point(basis: GpswfBasis, n: int) -> float:
    """Positive node of a Chebyshev grid maximizing |psi_n|, with c x* >= 1e-6."""
    j = np.arange(REFERENCE_GRID_POINTS)
    grid = np.cos(np.pi * j / (REFERENCE_GRID_POINTS - 1))
    grid = grid[(grid > 0.0) & (basis.c * grid >= MIN_BESSEL_ARGUMENT)]
    if grid.size == 0:
        raise NumericalError(f"no valid mu reference point for c={basis.c}")
    values = np.abs(eval_psi_grid(basis, n, grid))
    return float(grid[int(np.argmax(values))])


def _direct_mu(basis: GpswfBasis, n: int) -> tuple[float, float]:
    """
    |mu_n| from the Bessel sum at the reference point, and the relative accuracy it retains
    after cancellation (eps * Σ|terms| / |sum|). A negative value flags a phase other than i^n.
    """
    x = _reference_point(basis, n)
    alpha, z = basis.alpha, basis.c * x
    kmax = min(basis.matrix_size - 1, int(BESSEL_MAX_ORDER - alpha - 0.5))
    k = np.arange(n % 2, kmax + 1, 2)
    nu = k + alpha + 0.5
    log_h = np.array([math.log(jacobi_norm_h(int(kk), alpha)) for kk in k])
    log_pref = (
        0.5 * math.log(math.pi)
        + (alpha + 0.5) * math.log(2.0 / z)
        + special.gammaln(k + alpha + 1.0)
        - special.gammaln(k + 1.0)
        - 0.5 * log_h
    )
    # i^k / i^n = (-1)^{(k-n)/2} on the matching parity
    signs = np.where(((k - n) // 2) % 2 == 0, 1.0, -1.0)
    terms = basis.beta[n, k] * signs * np.exp(log_pref) * special.jv(nu, z)
    total = float(np.sum(terms))
    psi_x = float(eval_psi_grid(basis, n, np.array([x]))[0])
    scale = float(np.sum(np.abs(terms)))
    accuracy = math.inf if total == 0.0 else np.finfo(np.float64).eps * scale / abs(total)
    return total / psi_x, accuracy


@lru_cache(maxsize=16)
def _log_mu_chain(basis: GpswfBasis) -> NDArray[np.float64]:
    """log|mu_n| for every n in the basis (phase checked along the way)."""
    count = basis.count
    out = np.empty(count)
    if basis.c == 0.0:
        # F_0 f = ∫ f ω: only psi_0 = P~_0 survives
        out[:] = -math.inf
        out[0] = math.log(weight_mass(basis.alpha))
        out.setflags(write=False)
        return out

    mu0, acc0 = _direct_mu(basis, 0)
    if not (mu0 > 0.0 and acc0 < _DIRECT_RESOLVED):
        raise NumericalError(f"mu_0 not resolvable from the Bessel sum (got {mu0:.3e})")
    out[0] = math.log(mu0)

    if count > 1:
        rule = gauss_jacobi(basis.alpha, basis.matrix_size)
        psi = psi_table(basis, rule.nodes)
        deriv = psi_deriv_table(basis, rule.nodes)
        # <t psi_n, psi_{n+1}> and <psi'_{n+1}, psi_n>
        x_moment = (psi[:-1] * psi[1:]) @ (rule.nodes * rule.weights)
        d_moment = (deriv[1:] * psi[:-1]) @ rule.weights
        for n in range(count - 1):
            ratio = x_moment[n] / d_moment[n]
            if not ratio > 0.0:
                raise NumericalError(
                    f"phase of mu_{n + 1} is not i^{n + 1} (chain ratio {ratio:.3e})"
                )
            out[n + 1] = out[n] + math.log(basis.c * ratio)

    for n in range(count):
        direct, accuracy = _direct_mu(basis, n)
        if accuracy >= _DIRECT_RESOLVED:
            continue
        if direct <= 0.0:
            raise NumericalError(f"phase of mu_{n} is not i^{n} (direct sum {direct:.3e})")
        gap = abs(math.log(direct) - out[n])
        if gap > _MAGNITUDE_RTOL:
            logger.warning("mu_%d: direct and recurrence magnitudes differ by %.2e", n, gap)

    out.setflags(write=False)
    return out


def compute_mu(basis: GpswfBasis, n: int) -> tuple[float, int]:
    """
    (|mu_n|, n mod 4). For c = 0 only mu_0 = ∫ω_alpha is non-zero.

    Raises: IndexError for n outside the basis; NumericalError if no reference point is
    valid or a phase other than i^n shows up.
    """
    if not 0 <= n < basis.count:
        raise IndexError(f"index {n} outside computed range 0..{basis.count - 1}")
    return math.exp(_log_mu_chain(basis)[n]), n % 4


def compute_lambda(basis: GpswfBasis, n: int) -> float:
    """(c / 2 pi) |mu_n|^2, capped below 1. At c = 0 the relation degenerates: 0.0."""
    compute_mu(basis, n)  # index and phase checks
    if basis.c == 0.0:
        logger.warning("lambda_%d requested at c = 0: degenerate, reporting 0", n)
        return 0.0
    return math.exp(log_lambdas(basis)[n])


def compute_spectrum(basis: GpswfBasis) -> list[SpectralTriple]:
    """SpectralTriple for every computed index."""
    log_mu = _log_mu_chain(basis)
    if basis.c == 0.0:
        logger.warning("spectrum at c = 0 is degenerate: every lambda_n reported as 0")
    log_lam = log_lambdas(basis)
    out: list[SpectralTriple] = []
    for n in range(basis.count):
        mu_abs = math.exp(log_mu[n])
        out.append(
            SpectralTriple(
                n=n,
                chi=float(basis.chi[n]),
                mu_abs=mu_abs,
                log_mu_abs=float(log_mu[n]),
                lambda_=math.exp(log_lam[n]),
                log_lambda=float(log_lam[n]),
                phase_power=n % 4,
            )
        )
    return out


def log_mus(basis: GpswfBasis) -> NDArray[np.float64]:
    """log|mu_n| for the whole basis (read-only; -inf where mu_n = 0)."""
    return _log_mu_chain(basis)


def log_lambdas(basis: GpswfBasis) -> NDArray[np.float64]:
    """
    log lambda_n for the whole basis; finite far below the double range.

    Near lambda = 1 the chain can overshoot by a few ulps at large c, so values are capped
    below 0 and made non-increasing.
    """
    if basis.c == 0.0:
        return np.full(basis.count, -math.inf)
    raw = math.log(basis.c / (2.0 * math.pi)) + 2.0 * _log_mu_chain(basis)
    return np.minimum.accumulate(np.minimum(raw, _LOG_LAMBDA_CEILING))


def nystrom_lambda(params: GpswfParams, m: int, count: int) -> NDArray[np.float64]:
    """
    Top `count` eigenvalues (descending) of Q_c on an m-node Gauss-Jacobi rule:
    A_ij = sqrt(w_i) (c/2pi) K_alpha(c (x_i - x_j)) sqrt(w_j).

    Raises: PreconditionError unless m >= 4 count + 50.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if m < 4 * count + 50:
        raise PreconditionError(f"need m >= 4*count + 50 = {4 * count + 50}, got {m}")
    rule = gauss_jacobi(params.alpha, m)
    x, w = rule.nodes, rule.weights
    kernel = np.asarray(kernel_K(params.alpha, params.c * (x[:, None] - x[None, :])))
    root_w = np.sqrt(w)
    matrix = params.c / (2.0 * math.pi) * root_w[:, None] * kernel * root_w[None, :]
    matrix = 0.5 * (matrix + matrix.T)
    values = linalg.eigh(matrix, eigvals_only=True, subset_by_index=[m - count, m - 1])
    return np.sort(values)[::-1].copy()


class TraceReport(BaseModel):
    """Computed vs analytic trace of Q_c."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha: float
    c: float
    computed: float
    analytic: float
    rel_gap: float
    terms: int


def trace_identity(params: GpswfParams) -> TraceReport:
    """
    Σ_n lambda_n against (c/2pi) K_alpha(0) ∫ω_alpha = (c/2pi) (∫ω_alpha)^2.

    The basis grows (N doubled) until the last lambda is below 1e-15.
    Raises: DomainError for c <= 0.
    """
    if params.c <= 0.0:
        raise DomainError(f"trace identity needs c > 0, got {params.c}")
    mass = weight_mass(params.alpha)
    analytic = params.c / (2.0 * math.pi) * mass * mass
    N = math.ceil(2.0 * params.c / math.pi) + 20
    while True:
        basis = compute_basis(params, N)
        lam = np.exp(log_lambdas(basis))
        if lam[-1] < TRACE_TAIL:
            break
        N *= 2
    computed = float(np.sum(lam[::-1]))
    return TraceReport(
        alpha=params.alpha,
        c=params.c,
        computed=computed,
        analytic=analytic,
        rel_gap=abs(computed - analytic) / analytic,
        terms=int(lam.size),
    )


def fourier_identity_residual(basis: GpswfBasis, n: int, grid: ArrayLike) -> float:
    """
    max_x |(1/mu_n) ∫ psi_n(t) ω(t) e^{ictx} dt - psi_n(x)| / max_x |psi_n(x)| over grid,
    with the integral by a Gauss-Jacobi rule sized to resolve e^{ictx}.
    """
    xs = np.asarray(grid, dtype=np.float64)
    mu_abs, phase = compute_mu(basis, n)
    if mu_abs == 0.0:
        raise DomainError(f"mu_{n} is zero; the identity is undefined")
    m = basis.matrix_size + math.ceil(basis.c) + 32
    rule = gauss_jacobi(basis.alpha, m)
    psi_nodes = eval_psi_grid(basis, n, rule.nodes)
    phases = np.exp(1j * basis.c * np.outer(xs, rule.nodes))
    transform = phases @ (psi_nodes * rule.weights)
    lhs = transform / (1j**phase * mu_abs)
    target = eval_psi_grid(basis, n, xs)
    return float(np.max(np.abs(lhs - target)) / np.max(np.abs(target)))
