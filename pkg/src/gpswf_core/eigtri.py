"""
## Symmetric tridiagonal eigenproblems and Gauss-Jacobi quadrature (Golub-Welsch).

Why: the GPSWF coefficients are eigenvectors of two tridiagonal blocks, and every
L2([-1,1], ω_alpha) inner product in the package is a Gauss-Jacobi sum.

Importables
    SymTridiag      validated (diag, offdiag) pair
    symtrid_eigen   lowest `count` eigenpairs, ascending, deterministic signs, checked residuals
    symtrid_eigvals all eigenvalues, ascending (no vectors)
    QuadratureRule  nodes/weights for ω_alpha = (1-x^2)^alpha
    gauss_jacobi    Golub-Welsch nodes + Christoffel weights
    christoffel_sums Σ_k P~_k(x)^2 (reciprocal Christoffel numbers)

Determinism: no randomness; eigenvectors are signed so that their largest-magnitude
component is positive (ties: lowest index).

*Tested by: tests/test_eigtri.py*
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from gpswf_core.errors import DomainError, NumericalError
from gpswf_core.specfun import jacobi_recurrence, weight_mass

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-11
ORTHO_TOL = 1e-11


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix: diag (m,), offdiag (m-1,). Entries must be finite."""

    diag: NDArray[np.float64]
    offdiag: NDArray[np.float64]

    def __post_init__(self) -> None:
        d = np.ascontiguousarray(self.diag, dtype=np.float64)
        e = np.ascontiguousarray(self.offdiag, dtype=np.float64)
        if d.ndim != 1 or e.ndim != 1 or d.size == 0:
            raise DomainError("SymTridiag needs 1-d diag (non-empty) and 1-d offdiag")
        if e.size != d.size - 1:
            raise DomainError(f"offdiag length {e.size} != diag length {d.size} - 1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("SymTridiag entries must be finite")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    def matvec(self, v: NDArray[np.float64]) -> NDArray[np.float64]:
        """T @ v for v of shape (m,) or (m, k)."""
        d = self.diag.reshape((-1,) + (1,) * (v.ndim - 1))
        e = self.offdiag.reshape((-1,) + (1,) * (v.ndim - 1))
        out = d * v
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
        return out

    def inf_norm(self) -> float:
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())


def _fix_signs(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
    """Largest |component| positive; argmax picks the lowest index on ties."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0.0] = 1.0
    return vectors * signs


def symtrid_eigen(T: SymTridiag, count: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Lowest `count` eigenpairs of a symmetric tridiagonal matrix.

    Inputs: T (m x m), 1 <= count <= m.
    Returns: (values (count,) ascending, vectors (m, count) orthonormal columns).
    Raises:
        DomainError if count is out of range.
        NumericalError (with the failing index) if LAPACK does not converge, or if a
        residual ||Tv - λv||_inf exceeds 1e-11 (1 + |λ|) + 64 eps ||T||_inf.
    """
    m = T.size
    if not 1 <= count <= m:
        raise DomainError(f"count must be in [1, {m}], got {count}")

    if m == 1:
        return T.diag.copy(), np.ones((1, 1))

    try:
        values, vectors = linalg.eigh_tridiagonal(
            T.diag, T.offdiag, select="i", select_range=(0, count - 1)
        )
    except linalg.LinAlgError as e:
        raise NumericalError(f"tridiagonal eigensolver failed to converge: {e}") from e

    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _fix_signs(vectors[:, order])

    scale_T = 64.0 * np.finfo(np.float64).eps * T.inf_norm()
    resid = np.max(np.abs(T.matvec(vectors) - vectors * values), axis=0)
    bad = np.nonzero(resid > RESIDUAL_TOL * (1.0 + np.abs(values)) + scale_T)[0]
    if bad.size:
        i = int(bad[0])
        raise NumericalError(f"eigenpair {i} residual {resid[i]:.3e} above tolerance")

    gram = vectors.T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(count))))
    if ortho > ORTHO_TOL * max(1.0, count**0.5):
        raise NumericalError(f"eigenvectors lost orthonormality ({ortho:.3e})")
    return values, vectors


def symtrid_eigvals(T: SymTridiag) -> NDArray[np.float64]:
    """All eigenvalues, ascending."""
    if T.size == 1:
        return T.diag.copy()
    try:
        values = linalg.eigh_tridiagonal(T.diag, T.offdiag, eigvals_only=True)
    except linalg.LinAlgError as e:
        raise NumericalError(f"tridiagonal eigensolver failed to converge: {e}") from e
    return np.sort(values)


@dataclass(frozen=True)
class QuadratureRule:
    """
    Gauss-Jacobi rule for ω_alpha on [-1, 1]: nodes strictly increasing in (-1, 1), positive
    weights summing to ∫ω_alpha. Exact for polynomials of degree <= 2m - 1.
    """

    alpha: float
    nodes: NDArray[np.float64]
    weights: NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise DomainError("nodes and weights must be 1-d arrays of equal length")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: NDArray[np.float64]) -> NDArray[np.float64] | float:
        """Σ_j w_j f(x_j) along the last axis."""
        out = values @ self.weights
        return float(out) if np.ndim(out) == 0 else out


def jacobi_matrix(alpha: float, m: int) -> SymTridiag:
    """m x m Jacobi (recurrence) matrix of the orthonormal symmetric Jacobi family."""
    a = jacobi_recurrence(m - 1, alpha) if m > 1 else np.zeros(1)
    return SymTridiag(np.zeros(m), a[1:m])


def christoffel_sums(alpha: float, kmax: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Σ_{k<=kmax} P~_k(x)^2, streamed over k so large rules never hold the full table."""
    a = jacobi_recurrence(kmax, alpha)
    p_prev = np.full(x.shape, 1.0 / np.sqrt(weight_mass(alpha)))
    acc = p_prev * p_prev
    if kmax == 0:
        return acc
    p = x * p_prev / a[1]
    acc = acc + p * p
    for k in range(1, kmax):
        p_prev, p = p, (x * p - a[k] * p_prev) / a[k + 1]
        acc = acc + p * p
    return acc


def gauss_jacobi(alpha: float, m: int) -> QuadratureRule:
    """
    Gauss-Jacobi rule with m nodes for ω_alpha(x) = (1-x^2)^alpha.

    Nodes are the eigenvalues of the Jacobi matrix (Golub-Welsch). Weights are the
    Christoffel numbers 1/Σ_k P~_k(x_j)^2, which equal mass * v_0j^2 exactly but keep
    relative accuracy at the end points. Both are symmetrized about 0.
    Raises: DomainError for alpha <= -1 or m < 1; NumericalError from the eigensolver.
    """
    if m < 1:
        raise DomainError(f"node count must be >= 1, got {m}")
    mass = weight_mass(alpha)
    if m == 1:
        return QuadratureRule(alpha=alpha, nodes=np.zeros(1), weights=np.array([mass]))

    nodes = symtrid_eigvals(jacobi_matrix(alpha, m))
    nodes = 0.5 * (nodes - nodes[::-1])
    edge = float(np.nextafter(1.0, 0.0))
    nodes = np.clip(nodes, -edge, edge)
    weights = 1.0 / christoffel_sums(alpha, m - 1, nodes)
    weights = 0.5 * (weights + weights[::-1])
    # rescale so the zeroth moment is exact
    weights *= mass / weights.sum()
    logger.debug("gauss_jacobi(alpha=%g, m=%d) built", alpha, m)
    return QuadratureRule(alpha=alpha, nodes=nodes, weights=weights)
