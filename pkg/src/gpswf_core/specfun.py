"""
## Scalar special functions consumed by every other module.

Importables
    ln_gamma, beta                      log-Gamma and Beta (scipy.special behind domain checks)
    bessel_j, bessel_j_bound            J_nu on the operating envelope, and the |J_nu| power bound
    weight_mass                         ∫ (1-x^2)^alpha dx over [-1, 1]
    jacobi_norm_h                       h_k of the normalized Jacobi polynomial
    jacobi_recurrence                   orthonormal three-term recurrence coefficients a_k
    jacobi_table, jacobi_eval           normalized P_k^(alpha, alpha) by recurrence
    jacobi_deriv_table                  term-wise derivatives of the normalized polynomials
    kernel_K                            K_alpha(x) = ∫ e^{ixy} (1-y^2)^alpha dy

All functions are pure; array arguments are broadcast and scalars come back as float.

Envelope (bessel_j): 0 <= nu <= 400, 0 <= x <= 300. Orders grow with the Jacobi index
(k + alpha + 1/2) and arguments with the bandwidth (c|x| <= c), so this covers matrix
sizes of a few hundred and c up to 300.

*Tested by: tests/test_specfun.py*
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from gpswf_core.errors import DomainError, RangeError

BESSEL_MAX_ORDER = 400.0
BESSEL_MAX_ARG = 300.0

# |x| below this uses the Taylor series of K_alpha around 0
_KERNEL_SERIES_CUTOFF = 1e-3
_KERNEL_SERIES_TERMS = 6


def _as_result(arr: NDArray[np.float64]) -> float | NDArray[np.float64]:
    """0-d arrays go back to Python floats."""
    if arr.ndim == 0:
        return float(arr)
    return arr


def _check_alpha(alpha: float) -> None:
    if not math.isfinite(alpha) or alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")


def ln_gamma(x: ArrayLike) -> float | NDArray[np.float64]:
    """log Γ(x) for x > 0. Raises DomainError on non-positive or NaN input."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~(arr > 0.0)):
        raise DomainError("ln_gamma requires x > 0")
    return _as_result(special.gammaln(arr))


def beta(a: ArrayLike, b: ArrayLike) -> float | NDArray[np.float64]:
    """Γ(a)Γ(b)/Γ(a+b), evaluated in log space so large arguments do not overflow."""
    aa = np.asarray(a, dtype=np.float64)
    bb = np.asarray(b, dtype=np.float64)
    if np.any(~(aa > 0.0)) or np.any(~(bb > 0.0)):
        raise DomainError("beta requires a > 0 and b > 0")
    return _as_result(np.exp(special.betaln(aa, bb)))


def bessel_j(nu: ArrayLike, x: ArrayLike) -> float | NDArray[np.float64]:
    """
    Bessel function of the first kind J_nu(x) for real order and argument.

    Inputs: nu in [0, 400], x in [0, 300] (broadcast together).
    Raises: DomainError for negative nu or x, RangeError outside the envelope.
    """
    nn = np.asarray(nu, dtype=np.float64)
    xx = np.asarray(x, dtype=np.float64)
    if np.any(~(nn >= 0.0)) or np.any(~(xx >= 0.0)):
        raise DomainError("bessel_j requires nu >= 0 and x >= 0")
    if np.any(nn > BESSEL_MAX_ORDER) or np.any(xx > BESSEL_MAX_ARG):
        raise RangeError(
            f"bessel_j envelope is nu <= {BESSEL_MAX_ORDER}, x <= {BESSEL_MAX_ARG}"
        )
    return _as_result(special.jv(nn, xx))


def bessel_j_bound(nu: ArrayLike, x: ArrayLike) -> float | NDArray[np.float64]:
    """|x|^nu / (2^nu Γ(nu+1)), the classical upper bound on |J_nu(x)| for nu > -1/2."""
    nn = np.asarray(nu, dtype=np.float64)
    xx = np.abs(np.asarray(x, dtype=np.float64))
    with np.errstate(divide="ignore"):
        log_val = nn * np.log(xx / 2.0) - special.gammaln(nn + 1.0)
    out = np.where(xx == 0.0, np.where(nn == 0.0, 1.0, 0.0), np.exp(log_val))
    return _as_result(out)


def weight_mass(alpha: float) -> float:
    """∫_{-1}^{1} (1-x^2)^alpha dx = √π Γ(alpha+1)/Γ(alpha+3/2) = B(1/2, alpha+1)."""
    _check_alpha(alpha)
    return float(special.beta(0.5, alpha + 1.0))


def jacobi_norm_h(k: int, alpha: float) -> float:
    """
    h_k = 2^{2a+1} Γ(k+a+1)^2 / (k! (2k+2a+1) Γ(k+2a+1)), the squared L2(ω_alpha) norm of
    the classical P_k^(a, a). k = 0 uses the mass directly (removes the 0/0 at a = -1/2).
    """
    _check_alpha(alpha)
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if k == 0:
        return weight_mass(alpha)
    log_h = (
        (2.0 * alpha + 1.0) * math.log(2.0)
        + 2.0 * special.gammaln(k + alpha + 1.0)
        - special.gammaln(k + 1.0)
        - math.log(2.0 * k + 2.0 * alpha + 1.0)
        - special.gammaln(k + 2.0 * alpha + 1.0)
    )
    return float(math.exp(log_h))


def jacobi_recurrence(kmax: int, alpha: float) -> NDArray[np.float64]:
    """
    Coefficients a_0..a_kmax of x p_k = a_{k+1} p_{k+1} + a_k p_{k-1} for the orthonormal
    symmetric Jacobi family; a_0 = 0 and a_1^2 = 1/(2 alpha + 3).
    """
    _check_alpha(alpha)
    a = np.zeros(kmax + 1, dtype=np.float64)
    if kmax >= 1:
        a[1] = math.sqrt(1.0 / (2.0 * alpha + 3.0))
    if kmax >= 2:
        k = np.arange(2, kmax + 1, dtype=np.float64)
        a[2:] = np.sqrt(
            k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0))
        )
    return a


def _check_interval(x: NDArray[np.float64]) -> None:
    if np.any(~(np.abs(x) <= 1.0)):
        raise DomainError("Jacobi evaluation requires |x| <= 1")


def jacobi_table(kmax: int, alpha: float, x: ArrayLike) -> NDArray[np.float64]:
    """
    Normalized Jacobi polynomials P~_0..P~_kmax at the points x.

    Returns: array of shape (kmax + 1, *x.shape). Unit norm in L2([-1,1], ω_alpha).
    Raises: DomainError if any |x| > 1 or alpha <= -1.
    """
    _check_alpha(alpha)
    xx = np.asarray(x, dtype=np.float64)
    _check_interval(xx)
    a = jacobi_recurrence(kmax, alpha)
    table = np.empty((kmax + 1, *xx.shape), dtype=np.float64)
    table[0] = 1.0 / math.sqrt(weight_mass(alpha))
    if kmax >= 1:
        table[1] = xx * table[0] / a[1]
    for k in range(1, kmax):
        table[k + 1] = (xx * table[k] - a[k] * table[k - 1]) / a[k + 1]
    return table


def jacobi_eval(k: int, alpha: float, x: ArrayLike) -> float | NDArray[np.float64]:
    """P~_k^(alpha, alpha)(x) = P_k^(alpha, alpha)(x)/sqrt(h_k) by the three-term recurrence."""
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    return _as_result(jacobi_table(k, alpha, x)[k])


def jacobi_deriv_table(kmax: int, alpha: float, x: ArrayLike) -> NDArray[np.float64]:
    """
    Derivatives of P~_0..P~_kmax at x, using P~'_k^(a) = sqrt(k(k+2a+1)) P~_{k-1}^(a+1).

    Returns: array of shape (kmax + 1, *x.shape); row 0 is zero.
    """
    _check_alpha(alpha)
    xx = np.asarray(x, dtype=np.float64)
    out = np.zeros((kmax + 1, *xx.shape), dtype=np.float64)
    if kmax == 0:
        _check_interval(xx)
        return out
    shifted = jacobi_table(kmax - 1, alpha + 1.0, xx)
    k = np.arange(1, kmax + 1, dtype=np.float64)
    scale = np.sqrt(k * (k + 2.0 * alpha + 1.0))
    out[1:] = scale.reshape((-1,) + (1,) * xx.ndim) * shifted
    return out


def kernel_K(alpha: float, x: ArrayLike) -> float | NDArray[np.float64]:
    """
    K_alpha(x) = √π 2^{alpha+1/2} Γ(alpha+1) J_{alpha+1/2}(x)/x^{alpha+1/2}, the finite Fourier
    transform of the weight (1-y^2)^alpha. Even in x; K_alpha(0) = weight_mass(alpha).
    """
    _check_alpha(alpha)
    ax = np.abs(np.asarray(x, dtype=np.float64))
    out = np.empty_like(ax)

    small = ax < _KERNEL_SERIES_CUTOFF
    if np.any(small):
        # ∫ y^{2j} ω_alpha dy = B(j + 1/2, alpha + 1)
        xs = ax[small]
        acc = np.zeros_like(xs)
        for j in range(_KERNEL_SERIES_TERMS):
            moment = math.exp(special.betaln(j + 0.5, alpha + 1.0))
            acc += (-1.0) ** j * moment * xs ** (2 * j) / math.factorial(2 * j)
        out[small] = acc

    big = ~small
    if np.any(big):
        xb = ax[big]
        nu = alpha + 0.5
        log_pref = (
            0.5 * math.log(math.pi)
            + nu * math.log(2.0)
            + special.gammaln(alpha + 1.0)
            - nu * np.log(xb)
        )
        out[big] = np.exp(log_pref) * special.jv(nu, xb)
    return _as_result(out)
