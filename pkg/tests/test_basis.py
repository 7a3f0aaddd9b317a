"""
## GPSWF basis: block assembly, eigen-solve, invariants, evaluation.

Tests:
    1) block entries: k = 0 diagonal, c = 0 blocks, closed-form agreement.
    2) c = 0 basis is the Jacobi basis (chi = n(n+2a+1), beta = identity).
    3) chi bounds, strict ordering, parity, sign, unit norm, tail for c > 0.
    4) eigen-equation residual of each retained vector, orthonormality of psi_n.
    5) evaluation: grid vs pointwise, parity symmetry, derivative vs finite differences,
       differential-equation residual, Nystrom eigenfunction of the sinc kernel.
    6) errors: bad N, too-small K, truncation exhausted, |x| > 1, bad index.

*This tests: src/gpswf_core/basis.py*
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from gpswf_core.basis import (
    TAIL_TOL,
    GpswfBasis,
    GpswfParams,
    assemble_blocks,
    compute_basis,
    eval_psi,
    eval_psi_derivative_grid,
    eval_psi_grid,
    initial_matrix_size,
    psi_deriv_table,
    psi_table,
)
from gpswf_core.eigtri import gauss_jacobi
from gpswf_core.errors import DomainError, PreconditionError, TruncationError
from gpswf_core.specfun import jacobi_eval, kernel_K


def test_params_validation() -> None:
    with pytest.raises(ValidationError):
        GpswfParams(alpha=-1.0, c=1.0)
    with pytest.raises(ValidationError):
        GpswfParams(alpha=0.0, c=-1.0)
    with pytest.raises(ValidationError):
        GpswfParams(alpha=0.0, c=1.0, matrix_size=2)
    with pytest.raises(ValidationError):
        GpswfParams(alpha=0.0, c=1.0, extra=3)  # type: ignore[call-arg]


def test_initial_matrix_size_is_even() -> None:
    assert initial_matrix_size(100, 0.0) == max(202, math.ceil(1.2 * 100) + 40)
    assert initial_matrix_size(3, 0.0) >= 2 * 4
    assert initial_matrix_size(10, 50.0) >= math.ceil(1.2 * 60) + 40
    assert all(initial_matrix_size(n, 7.3) % 2 == 0 for n in range(30))


def test_first_diagonal_entry() -> None:
    even, odd = assemble_blocks(GpswfParams(alpha=0.0, c=7.0), 20)
    assert even.diag[0] == pytest.approx(49.0 / 3.0, rel=1e-15)
    assert even.size == 10 and odd.size == 10


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_c_zero_blocks_are_diagonal(alpha: float) -> None:
    even, odd = assemble_blocks(GpswfParams(alpha=alpha, c=0.0), 12)
    k = np.arange(12.0)
    assert np.array_equal(even.offdiag, np.zeros(5))
    assert np.array_equal(odd.offdiag, np.zeros(5))
    assert np.allclose(even.diag, (k * (k + 2 * alpha + 1))[0::2], rtol=0, atol=1e-13)
    assert np.allclose(odd.diag, (k * (k + 2 * alpha + 1))[1::2], rtol=0, atol=1e-13)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 1.5])
def test_entries_match_closed_forms(alpha: float) -> None:
    c, K = 10.0, 40
    even, odd = assemble_blocks(GpswfParams(alpha=alpha, c=c), K)
    k = np.arange(K, dtype=np.float64)
    a = alpha
    diag = k * (k + 2 * a + 1) + c * c * (2 * k * (k + 2 * a + 1) + 2 * a - 1) / (
        (2 * k + 2 * a + 3) * (2 * k + 2 * a - 1)
    )
    kk = k[: K - 2]
    off = (
        c
        * c
        * np.sqrt((kk + 1) * (kk + 2) * (kk + 2 * a + 1) * (kk + 2 * a + 2))
        / ((2 * kk + 2 * a + 3) * np.sqrt((2 * kk + 2 * a + 5) * (2 * kk + 2 * a + 1)))
    )
    assert np.allclose(even.diag, diag[0::2], rtol=1e-13)
    assert np.allclose(odd.diag, diag[1::2], rtol=1e-13)
    assert np.allclose(even.offdiag, off[0::2], rtol=1e-13)
    assert np.allclose(odd.offdiag, off[1::2], rtol=1e-13)


def test_assemble_needs_size() -> None:
    with pytest.raises(PreconditionError):
        assemble_blocks(GpswfParams(alpha=0.0, c=1.0))


def test_c_zero_basis_is_jacobi() -> None:
    basis = compute_basis(GpswfParams(alpha=1.0, c=0.0), 5)
    assert basis.chi.tolist() == [0.0, 4.0, 10.0, 18.0, 28.0, 40.0]
    assert np.array_equal(basis.beta[:, :6], np.eye(6))
    assert np.all(basis.beta[:, 6:] == 0.0)
    x = np.linspace(-1.0, 1.0, 9)
    assert np.allclose(eval_psi_grid(basis, 3, x), jacobi_eval(3, 1.0, x), rtol=1e-14)


def test_basis_invariants(gegenbauer_c10: GpswfBasis) -> None:
    basis = gegenbauer_c10
    n = np.arange(basis.count, dtype=np.float64)
    base = n * (n + 2 * basis.alpha + 1)
    assert np.all(base <= basis.chi)
    assert np.all(basis.chi <= base + basis.c**2)
    assert np.all(np.diff(basis.chi) > 0)

    for i in range(basis.count):
        row = basis.beta[i]
        assert np.all(row[(i + 1) % 2 :: 2] == 0.0)
        assert float(row @ row) == pytest.approx(1.0, abs=1e-12)
        nz = row[i % 2 :: 2]
        assert abs(nz[-1]) <= TAIL_TOL * np.max(np.abs(nz))
        assert eval_psi(basis, i, 1.0) > 0.0

    with pytest.raises(ValueError):
        basis.beta[0, 0] = 1.0  # read-only


def test_chi_bounds_legendre_c10() -> None:
    basis = compute_basis(GpswfParams(alpha=0.0, c=10.0), 20)
    n = np.arange(21, dtype=np.float64)
    assert np.all(basis.chi >= n * (n + 1))
    assert np.all(basis.chi <= n * (n + 1) + 100.0)


def test_eigen_equation_residual(gegenbauer_c10: GpswfBasis) -> None:
    basis = gegenbauer_c10
    even, odd = assemble_blocks(basis.params, basis.matrix_size)
    for i in range(basis.count):
        block = even if i % 2 == 0 else odd
        v = basis.beta[i, i % 2 :: 2]
        chi = float(basis.chi[i])
        resid = np.max(np.abs(block.matvec(v) - chi * v))
        assert resid <= 1e-9 * max(1.0, chi)


def test_orthonormality(legendre_c5: GpswfBasis) -> None:
    basis = legendre_c5
    rule = gauss_jacobi(basis.alpha, basis.matrix_size)
    psi = psi_table(basis, rule.nodes)
    gram = (psi * rule.weights) @ psi.T
    assert np.max(np.abs(gram - np.eye(basis.count))) < 1e-9


def test_grid_matches_pointwise(example_basis: GpswfBasis) -> None:
    x = np.linspace(-1.0, 1.0, 1001)
    grid = eval_psi_grid(example_basis, 10, x)
    loop = np.array([eval_psi(example_basis, 10, float(t)) for t in x])
    assert np.max(np.abs(grid - loop)) == 0.0
    assert eval_psi(example_basis, 10, 0.3) == eval_psi_grid(example_basis, 10, [0.3])[0]


def test_table_matches_single_rows(gegenbauer_c10: GpswfBasis) -> None:
    x = np.linspace(-1.0, 1.0, 33)
    table = psi_table(gegenbauer_c10, x)
    dtable = psi_deriv_table(gegenbauer_c10, x)
    for n in (0, 7, 20):
        assert np.allclose(table[n], eval_psi_grid(gegenbauer_c10, n, x), atol=1e-12)
        assert np.allclose(dtable[n], eval_psi_derivative_grid(gegenbauer_c10, n, x), atol=1e-10)


def test_parity_symmetry(legendre_c5: GpswfBasis) -> None:
    x = np.linspace(0.0, 1.0, 21)
    for n in range(8):
        plus = eval_psi_grid(legendre_c5, n, x)
        minus = eval_psi_grid(legendre_c5, n, -x)
        assert np.allclose(minus, (-1) ** n * plus, atol=1e-13)
        if n % 2:
            assert abs(eval_psi(legendre_c5, n, 0.0)) < 1e-14


def test_derivative_matches_finite_differences(gegenbauer_c10: GpswfBasis) -> None:
    x = np.linspace(-0.9, 0.9, 11)
    h = 1e-6
    for n in (0, 3, 12):
        fd = (
            eval_psi_grid(gegenbauer_c10, n, x + h) - eval_psi_grid(gegenbauer_c10, n, x - h)
        ) / (2 * h)
        exact = eval_psi_derivative_grid(gegenbauer_c10, n, x)
        assert np.max(np.abs(exact - fd)) < 1e-6 * max(1.0, float(np.max(np.abs(exact))))


def test_differential_equation_residual(gegenbauer_c10: GpswfBasis) -> None:
    # -(1-x^2) psi'' + 2(a+1) x psi' + c^2 x^2 psi = chi psi, psi'' by 5-point differences
    basis = gegenbauer_c10
    alpha, c = basis.alpha, basis.c
    x = np.linspace(-0.9, 0.9, 19)
    h = 1e-4
    for n in (0, 3, 12):
        f = {j: eval_psi_grid(basis, n, x + j * h) for j in (-2, -1, 0, 1, 2)}
        second = (-f[2] + 16.0 * f[1] - 30.0 * f[0] + 16.0 * f[-1] - f[-2]) / (12.0 * h * h)
        first = eval_psi_derivative_grid(basis, n, x)
        chi = float(basis.chi[n])
        lhs = -(1.0 - x * x) * second + 2.0 * (alpha + 1.0) * x * first + c * c * x * x * f[0]
        scale = max(1.0, chi) * float(np.max(np.abs(f[0])))
        assert np.max(np.abs(lhs - chi * f[0])) <= 1e-6 * scale


def test_matches_nystrom_eigenfunction() -> None:
    # top eigenvector of the sinc-kernel operator on a Gauss-Legendre rule, interpolated
    c = 1.0
    basis = compute_basis(GpswfParams(alpha=0.0, c=c), 4)
    rule = gauss_jacobi(0.0, 64)
    t, w = rule.nodes, rule.weights
    root_w = np.sqrt(w)
    kernel = c / (2.0 * math.pi) * np.asarray(kernel_K(0.0, c * (t[:, None] - t[None, :])))
    values, vectors = np.linalg.eigh(root_w[:, None] * kernel * root_w[None, :])
    lam0, psi_nodes = values[-1], vectors[:, -1] / root_w
    row = c / (2.0 * math.pi) * np.asarray(kernel_K(0.0, c * (0.5 - t)))
    oracle = float(row @ (w * psi_nodes)) / lam0
    ours = eval_psi(basis, 0, 0.5)
    assert abs(ours) == pytest.approx(abs(oracle), rel=1e-9)


def test_errors() -> None:
    params = GpswfParams(alpha=0.0, c=1.0)
    with pytest.raises(DomainError):
        compute_basis(params, -1)
    with pytest.raises(PreconditionError):
        compute_basis(GpswfParams(alpha=0.0, c=1.0, matrix_size=4), 10)

    basis = compute_basis(params, 3)
    with pytest.raises(IndexError):
        eval_psi(basis, 4, 0.0)
    with pytest.raises(DomainError):
        eval_psi(basis, 0, 1.5)


def test_truncation_error_after_retries() -> None:
    params = GpswfParams(alpha=0.0, c=60.0, matrix_size=8)
    with pytest.raises(TruncationError) as info:
        compute_basis(params, 2)
    assert info.value.matrix_size == 64
    assert info.value.worst_tail > TAIL_TOL


def test_matrix_size_grows_when_needed(caplog: pytest.LogCaptureFixture) -> None:
    params = GpswfParams(alpha=0.0, c=20.0, matrix_size=16)
    with caplog.at_level("INFO", logger="gpswf_core.basis"):
        basis = compute_basis(params, 4)
    assert basis.matrix_size > 16
    assert any("doubling" in r.message for r in caplog.records)
    reference = compute_basis(GpswfParams(alpha=0.0, c=20.0), 4)
    assert np.allclose(basis.chi, reference.chi, rtol=1e-11)


def test_basis_count_and_size(legendre_c5: GpswfBasis) -> None:
    assert legendre_c5.count == 41
    assert legendre_c5.matrix_size == initial_matrix_size(40, 5.0)
    assert legendre_c5.coefficients(3).shape == (legendre_c5.matrix_size,)
    assert math.isclose(legendre_c5.alpha, 0.0) and math.isclose(legendre_c5.c, 5.0)
