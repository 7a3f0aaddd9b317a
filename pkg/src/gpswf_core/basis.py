"""
## GPSWF basis: parity-split Jacobi eigensystem, chi_n, beta coefficients, evaluation.

Why: every spectral quantity (mu_n, lambda_n), bound check and projection starts from the
expansion psi_n(x) = Σ_k beta_k^n P~_k(x) in normalized Jacobi polynomials.

Importables
    GpswfParams            (alpha, c, matrix_size): frozen, strict pydantic model
    GpswfBasis             chi (ascending), beta (count, K) with explicit parity zeros
    initial_matrix_size    truncation rule K = max(2(N+1), ceil(1.2 (N + c)) + 40), even
    assemble_blocks        even / odd SymTridiag blocks of the coefficient recurrence
    compute_basis          eigen-solve, parity merge, tail check with K doubling, sign fix
    eval_psi, eval_psi_grid, psi_table
    eval_psi_derivative_grid, psi_deriv_table

Invariants of a returned basis:
    n(n+2a+1) <= chi_n <= n(n+2a+1) + c^2, chi strictly increasing, psi_n(1) > 0,
    Σ_k (beta_k^n)^2 = 1, |beta_{last}^n| <= 1e-13 max_k |beta_k^n|.

A completed basis is immutable (read-only arrays) and safe to share between threads.

*Tested by: tests/test_basis.py*
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from gpswf_core.eigtri import SymTridiag, symtrid_eigen
from gpswf_core.errors import DomainError, NumericalError, PreconditionError, TruncationError
from gpswf_core.specfun import (
    jacobi_deriv_table,
    jacobi_recurrence,
    jacobi_table,
    weight_mass,
)

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-13
MAX_RETRIES = 3
# components below this fraction of the peak are rebuilt by upward recursion
_REFINE_FRACTION = 1e-3
_RESCALE_AT = 1e100


class GpswfParams(BaseModel):
    """
    One GPSWF family.

    alpha: weight exponent, > -1.   c: bandwidth, >= 0.
    matrix_size: Jacobi truncation K (even, >= 4); None means "use initial_matrix_size".
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha: float = Field(gt=-1.0, allow_inf_nan=False)
    c: float = Field(ge=0.0, allow_inf_nan=False)
    matrix_size: int | None = Field(default=None, ge=4)


def initial_matrix_size(N: int, c: float) -> int:
    """max(2(N+1), ceil(1.2 (N + c)) + 40), rounded up to even."""
    K = max(2 * (N + 1), math.ceil(1.2 * (N + c)) + 40)
    return K + (K % 2)


def _block_entries(
    alpha: float, c: float, K: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Full-length diagonal d_k (k < K) and the k <-> k+2 coupling e_k (k < K-2).

    d_k = k(k+2a+1) + c^2 (a_k^2 + a_{k+1}^2) and e_k = c^2 a_{k+1} a_{k+2} are the entries
    of the coefficient recurrence written through the orthonormal recurrence a_k; they equal
    the closed forms [2k(k+2a+1)+2a-1]/[(2k+2a+3)(2k+2a-1)] and
    sqrt((k+1)(k+2)(k+2a+1)(k+2a+2))/[(2k+2a+3) sqrt((2k+2a+5)(2k+2a+1))] without their
    removable 0/0 at a = 1/2, k = 0.
    """
    a = jacobi_recurrence(K + 1, alpha)
    k = np.arange(K, dtype=np.float64)
    c2 = c * c
    diag = k * (k + 2.0 * alpha + 1.0) + c2 * (a[:K] ** 2 + a[1 : K + 1] ** 2)
    coupling = c2 * a[1 : K - 1] * a[2:K]
    return diag, coupling


def assemble_blocks(
    params: GpswfParams, matrix_size: int | None = None
) -> tuple[SymTridiag, SymTridiag]:
    """
    Even (k = 0, 2, ...) and odd (k = 1, 3, ...) tridiagonal blocks of the eigensystem.

    Inputs: params; matrix_size K overrides params.matrix_size (one of them is required).
    Raises: DomainError for alpha <= -1; PreconditionError if K is missing or < 4.
    """
    if params.alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {params.alpha}")
    K = matrix_size if matrix_size is not None else params.matrix_size
    if K is None or K < 4:
        raise PreconditionError(f"matrix size must be >= 4, got {K}")
    diag, coupling = _block_entries(params.alpha, params.c, K)
    even = SymTridiag(diag[0::2], coupling[0::2])
    odd = SymTridiag(diag[1::2], coupling[1::2])
    return even, odd


@dataclass(frozen=True, eq=False)
class GpswfBasis:
    """
    Computed expansion for indices 0..count-1.

    chi:  (count,) ascending.
    beta: (count, K); row n holds beta_k^n over Jacobi degrees k, zero when k != n (mod 2).
    Identity-hashed so per-basis caches (spectrum) can key on it.
    """

    params: GpswfParams
    chi: NDArray[np.float64]
    beta: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.chi.setflags(write=False)
        self.beta.setflags(write=False)

    @property
    def count(self) -> int:
        return int(self.chi.size)

    @property
    def matrix_size(self) -> int:
        return int(self.beta.shape[1])

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def c(self) -> float:
        return self.params.c

    def coefficients(self, n: int) -> NDArray[np.float64]:
        """beta_k^n over k = 0..K-1 (read-only view)."""
        _check_index(self, n)
        return self.beta[n]


def _check_index(basis: GpswfBasis, n: int) -> None:
    if not 0 <= n < basis.count:
        raise IndexError(f"index {n} outside computed range 0..{basis.count - 1}")


def _refine_small_components(
    block: SymTridiag, value: float, vec: NDArray[np.float64]
) -> NDArray[np.float64]:
    """
    Rebuild the leading components that sit far below the peak by upward recursion of
    (T - value) v = 0, matched to vec at the first component >= 1e-3 of the peak.
    Upward is the growing direction through that region, so the small entries come out with
    relative (not absolute) accuracy.
    """
    peak = np.max(np.abs(vec))
    match = int(np.argmax(np.abs(vec) >= _REFINE_FRACTION * peak))
    if match == 0:
        return vec
    d, e = block.diag, block.offdiag
    if np.any(e[:match] == 0.0):
        return vec
    w = np.empty(match + 1)
    w[0] = 1.0
    w[1] = (value - d[0]) * w[0] / e[0]
    for j in range(1, match):
        w[j + 1] = ((value - d[j]) * w[j] - e[j - 1] * w[j - 1]) / e[j]
        if abs(w[j + 1]) > _RESCALE_AT:
            w[: j + 2] /= abs(w[j + 1])
    if w[match] == 0.0 or not np.all(np.isfinite(w)):
        return vec
    out = vec.copy()
    out[:match] = w[:match] * (vec[match] / w[match])
    return out


def compute_basis(params: GpswfParams, N: int) -> GpswfBasis:
    """
    GPSWF expansion for n = 0..N.

    Builds both parity blocks, takes the lowest N//2+1 even and (N+1)//2 odd eigenpairs,
    merges them by chi and checks that index n has parity n mod 2. If any retained vector has
    a last coefficient above 1e-13 of its peak, K is doubled and the solve repeated (at most
    3 retries). Signs are fixed so psi_n(1) > 0.

    Raises:
        DomainError for N < 0; PreconditionError if params.matrix_size < 2(N//2 + 1);
        NumericalError on parity interlacing failure; TruncationError after the retries.
    """
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    n_even = N // 2 + 1
    n_odd = (N + 1) // 2
    K = params.matrix_size if params.matrix_size is not None else initial_matrix_size(N, params.c)
    K += K % 2
    if K < 2 * n_even:
        raise PreconditionError(f"matrix size {K} too small for N = {N}")

    worst = math.inf
    for attempt in range(MAX_RETRIES + 1):
        even, odd = assemble_blocks(params, K)
        ev, evec = symtrid_eigen(even, n_even)
        if n_odd:
            ov, ovec = symtrid_eigen(odd, n_odd)
        else:
            ov, ovec = np.empty(0), np.empty((odd.size, 0))

        tails = [abs(v[-1]) / np.max(np.abs(v)) for v in (*evec.T, *ovec.T)]
        worst = max(tails)
        if worst <= TAIL_TOL:
            break
        logger.info(
            "tail %.3e above %.0e at K=%d (attempt %d), doubling", worst, TAIL_TOL, K, attempt
        )
        K *= 2
    else:
        raise TruncationError(
            f"Jacobi tail {worst:.3e} still above {TAIL_TOL:.0e} at K={K // 2}",
            worst_tail=float(worst),
            matrix_size=K // 2,
        )

    merged = sorted(
        [(float(v), 0, j) for j, v in enumerate(ev)] + [(float(v), 1, j) for j, v in enumerate(ov)]
    )
    chi = np.empty(N + 1)
    beta = np.zeros((N + 1, K))
    ones = jacobi_table(K - 1, params.alpha, 1.0)
    for n, (value, parity, j) in enumerate(merged):
        if parity != n % 2:
            raise NumericalError(
                f"parity interlacing violated at n={n}: chi={value:.17g} has parity {parity}"
            )
        block, vecs = (even, evec) if parity == 0 else (odd, ovec)
        vec = vecs[:, j]
        if params.c > 0.0:
            vec = _refine_small_components(block, value, vec)
        row = np.zeros(K)
        row[parity::2] = vec
        if row @ ones < 0.0:
            row = -row
        chi[n] = value
        beta[n] = row

    if np.any(np.diff(chi) <= 0.0):
        raise NumericalError("chi values are not strictly increasing")
    logger.debug("basis alpha=%g c=%g N=%d K=%d", params.alpha, params.c, N, K)
    return GpswfBasis(params=params, chi=chi, beta=beta)


def _grid(x: ArrayLike) -> NDArray[np.float64]:
    xx = np.asarray(x, dtype=np.float64)
    if np.any(~(np.abs(xx) <= 1.0)):
        raise DomainError("GPSWF evaluation is limited to [-1, 1]")
    return xx


def eval_psi_grid(basis: GpswfBasis, n: int, grid: ArrayLike) -> NDArray[np.float64]:
    """
    psi_n at every grid point (same shape as grid).

    The Jacobi recurrence and the coefficient sum are streamed together elementwise, so the
    value at a point does not depend on what other points share the call.
    Raises: IndexError for n outside the basis, DomainError for |x| > 1.
    """
    _check_index(basis, n)
    x = _grid(grid)
    coef = basis.beta[n]
    a = jacobi_recurrence(basis.matrix_size, basis.alpha)
    p_prev = np.full(x.shape, 1.0 / math.sqrt(weight_mass(basis.alpha)))
    acc = coef[0] * p_prev
    p = x * p_prev / a[1]
    acc = acc + coef[1] * p
    for k in range(1, basis.matrix_size - 1):
        p_next = (x * p - a[k] * p_prev) / a[k + 1]
        acc = acc + coef[k + 1] * p_next
        p_prev, p = p, p_next
    return acc


def eval_psi(basis: GpswfBasis, n: int, x: float) -> float:
    """psi_n(x) for a single |x| <= 1."""
    return float(eval_psi_grid(basis, n, np.array([x]))[0])


def psi_table(basis: GpswfBasis, x: ArrayLike) -> NDArray[np.float64]:
    """All psi_n at x: shape (count, *x.shape)."""
    xx = _grid(x)
    return np.tensordot(basis.beta, jacobi_table(basis.matrix_size - 1, basis.alpha, xx), axes=1)


def psi_deriv_table(basis: GpswfBasis, x: ArrayLike) -> NDArray[np.float64]:
    """All psi_n' at x by term-wise differentiation: shape (count, *x.shape)."""
    xx = _grid(x)
    return np.tensordot(
        basis.beta, jacobi_deriv_table(basis.matrix_size - 1, basis.alpha, xx), axes=1
    )


def eval_psi_derivative_grid(basis: GpswfBasis, n: int, grid: ArrayLike) -> NDArray[np.float64]:
    """psi_n'(x) at every grid point via P~'_k = sqrt(k(k+2a+1)) P~_{k-1}^(a+1)."""
    _check_index(basis, n)
    xx = _grid(grid)
    table = jacobi_deriv_table(basis.matrix_size - 1, basis.alpha, xx)
    return np.tensordot(basis.beta[n], table, axes=1)
