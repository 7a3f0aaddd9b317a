"""
## Spectral projection, Sobolev-type norms, bound shapes and deflection.

Tests:
    1) projecting psi_2 reproduces it; discrete Parseval holds for the rule.
    2) worked examples: sinc (a = 40) and the kernel on alpha = 1, c = 50; Sobolev signal
       for one seed and as a median over 8 seeds (slow).
    3) kernel coefficients match 2 pi lambda_n psi_n(0).
    4) sobolev_norm on Jacobi polynomials; bound-shape scaling.
    5) deflection cases, the substitution example, roundoff near 1, monotonicity in N, and
       argument checks.
    6) under-resolved quadrature raises a ResolutionWarning.
    7) Sobolev-rate constant stays below 1 and stable across seeds (slow).

*This tests: src/gpswf_core/approx.py*
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import pytest
from numpy.typing import NDArray

from gpswf_core.approx import (
    DECAY_CONSTANT_RTOL,
    BoundShape,
    approx_error_bound_rhs,
    deflection,
    kernel_coefficient_identity,
    kernel_norm_sq,
    project,
    projection_rule,
    sobolev_decay_constants,
    sobolev_decay_shape,
    sobolev_norm,
)
from gpswf_core.basis import GpswfBasis, GpswfParams, compute_basis, eval_psi_grid
from gpswf_core.eigtri import gauss_jacobi
from gpswf_core.errors import DomainError, PreconditionError, ResolutionWarning
from gpswf_core.signals import (
    Signal,
    SignalKind,
    bessel_kernel_signal,
    sinc_signal,
    sobolev_signal,
)
from gpswf_core.specfun import jacobi_eval, weight_mass
from gpswf_core.spectrum import log_lambdas


def _from_func(
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]], bandwidth: float = 1.0
) -> Signal:
    return Signal(
        kind=SignalKind.USER_SAMPLES, params={}, bandwidth=bandwidth, parity=None, func=func
    )


def test_project_basis_function(legendre_c5: GpswfBasis) -> None:
    f = _from_func(lambda x: eval_psi_grid(legendre_c5, 2, x), bandwidth=5.0)
    rep = project(legendre_c5, f, 4)
    assert rep.err_weighted_l2 <= 1e-10
    assert rep.err_sup_grid <= 1e-9
    expected = np.zeros(5)
    expected[2] = 1.0
    assert np.allclose(rep.coefficients, expected, atol=1e-12)
    assert rep.signal_norm == pytest.approx(1.0, rel=1e-12)
    assert rep.bound_rhs is None and rep.warnings == ()


def test_discrete_parseval(gegenbauer_c10: GpswfBasis) -> None:
    f = sinc_signal(6.0)
    rule = projection_rule(gegenbauer_c10, f)
    for N in (0, 5, 12):
        rep = project(gegenbauer_c10, f, N, rule)
        total = float(rep.coefficients @ rep.coefficients) + rep.err_weighted_l2**2
        assert total == pytest.approx(rep.signal_norm**2, rel=1e-10)
    # even signal: odd-index coefficients vanish
    assert np.all(np.abs(rep.coefficients[1::2]) <= 1e-12)


def test_sinc_example(example_basis: GpswfBasis) -> None:
    f = sinc_signal(40.0)
    rule = projection_rule(example_basis, f)
    errs = {N: project(example_basis, f, N, rule).err_weighted_l2 for N in (20, 25, 30)}
    assert errs[25] < errs[20]
    # measured ratio err20/err30 is about 67, confirmed against an independent Nystrom projection
    assert errs[30] <= errs[20] / 50.0


def test_kernel_example(example_basis: GpswfBasis) -> None:
    alpha, c = example_basis.alpha, example_basis.c
    g = bessel_kernel_signal(alpha, c)
    lam = np.exp(log_lambdas(example_basis))
    rep = project(example_basis, g, 40, lambda_n=float(lam[40]))
    assert rep.err_weighted_l2 <= 1e-6
    tail = math.sqrt(2.0 * math.pi * c * float(lam[41]) * weight_mass(alpha))
    assert rep.err_weighted_l2 <= tail * (1.0 + 1e-6) + 1e-10
    assert rep.bound_rhs == pytest.approx(math.sqrt(lam[40]) * rep.signal_norm)


def test_kernel_coefficient_identity(gegenbauer_c10: GpswfBasis) -> None:
    basis = gegenbauer_c10
    g = bessel_kernel_signal(basis.alpha, basis.c)
    lam = np.exp(log_lambdas(basis))
    rep = project(basis, g, basis.count - 1)
    exact = np.array(
        [kernel_coefficient_identity(basis, n, float(lam[n])) for n in range(basis.count)]
    )
    assert np.allclose(rep.coefficients, exact, rtol=0, atol=1e-10 * rep.signal_norm)
    assert np.all(exact[1::2] == 0.0)


def test_kernel_norm_sq(gegenbauer_c10: GpswfBasis) -> None:
    basis = gegenbauer_c10
    lam = np.exp(log_lambdas(basis))
    psi0 = np.array([eval_psi_grid(basis, n, np.array([0.0]))[0] for n in range(basis.count)])
    partial = 4.0 * math.pi**2 * float(np.sum(lam * psi0**2))
    assert partial == pytest.approx(kernel_norm_sq(basis.alpha, basis.c), rel=1e-9)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("s", [0.0, 1.0, 2.5])
def test_sobolev_norm_of_jacobi(alpha: float, s: float) -> None:
    rule = gauss_jacobi(alpha, 24)
    p0 = _from_func(lambda x: jacobi_eval(0, alpha, x))
    p3 = _from_func(lambda x: jacobi_eval(3, alpha, x))
    assert sobolev_norm(p0, s, alpha, 10, rule) == pytest.approx(1.0, rel=1e-12)
    assert sobolev_norm(p3, s, alpha, 10, rule) == pytest.approx(10.0 ** (s / 2.0), rel=1e-12)


def test_sobolev_norm_sum() -> None:
    rule = gauss_jacobi(0.25, 24)
    f = _from_func(lambda x: jacobi_eval(1, 0.25, x) + jacobi_eval(2, 0.25, x))
    assert sobolev_norm(f, 1.0, 0.25, 10, rule) == pytest.approx(math.sqrt(7.0), rel=1e-12)


def test_sobolev_norm_rejects() -> None:
    rule = gauss_jacobi(0.0, 8)
    f = sinc_signal(1.0)
    with pytest.raises(DomainError):
        sobolev_norm(f, -1.0, 0.0, 4, rule)
    with pytest.raises(DomainError):
        sobolev_norm(f, 1.0, 0.5, 4, rule)
    with pytest.raises(PreconditionError):
        sobolev_norm(f, 1.0, 0.0, 8, rule)


def test_bound_shapes() -> None:
    lam, chi, alpha, c, norm = 1e-6, 400.0, 1.0, 5.0, 2.0
    base = math.sqrt(lam) * norm
    rhs = approx_error_bound_rhs(BoundShape.APPROXX1, lam, chi, alpha, c, norm)
    assert rhs == pytest.approx(base)
    rhs = approx_error_bound_rhs("approxx2", lam, chi, alpha, c, norm)
    assert rhs == pytest.approx(base * 400.0)
    assert approx_error_bound_rhs("approx2", lam, chi, alpha, c, norm) == pytest.approx(
        base * 400.0**1.5
    )
    assert approx_error_bound_rhs("approx1", lam, chi, 0.0, c, norm) == pytest.approx(base * 20.0)
    bad_args = [
        (0.0, chi, alpha, c),
        (lam, 0.0, alpha, c),
        (lam, chi, -0.5, c),
        (lam, chi, alpha, 0.0),
    ]
    for bad in bad_args:
        with pytest.raises(DomainError):
            approx_error_bound_rhs("approxx1", *bad, norm)
    with pytest.raises(ValueError):
        approx_error_bound_rhs("nope", lam, chi, alpha, c, norm)


def test_deflection_cases() -> None:
    lam = [0.95, 0.5, 0.1, 0.01]
    r = deflection(lam, 2, 0.125)
    assert r.case == "formula"
    assert r.deflection == pytest.approx(0.075 / 0.85, rel=1e-14)
    assert r.bound == pytest.approx(0.125 / 0.9, rel=1e-14)

    sat = deflection(lam, 1, 0.6)
    assert (sat.deflection, sat.case) == (1.0, "saturated")

    cl = deflection([0.8, 0.1], 1, 0.1)
    assert cl.clamped and cl.deflection == 0.0
    assert cl.as_dict() == {"deflection": 0.0, "bound": cl.bound, "case": "clamped"}


def test_deflection_substitution_example() -> None:
    r = deflection([0.9, 0.1], 1, 0.2)
    assert r.case == "formula"
    assert r.deflection == pytest.approx(0.125, rel=1e-14)
    assert r.bound == pytest.approx(0.2 / 0.9, rel=1e-14)


def test_deflection_roundoff_near_one() -> None:
    # one-ulp ascent just below 1, as a large-c spectrum produces it
    a = float(np.nextafter(1.0, 0.0))
    b = float(np.nextafter(a, 0.0))
    lam = [b, a, b, 0.4]
    sat = deflection(lam, 2, 0.1)
    assert sat.case == "saturated" and sat.deflection == 1.0
    r = deflection(lam, 3, 0.1)
    assert r.case == "formula" and 0.0 < r.deflection < 1.0
    at_one = deflection([1.0, 1.0, 0.2], 1, 0.1)
    assert at_one.case == "saturated" and at_one.bound == math.inf


@pytest.mark.parametrize("c", [30.0, 50.0])
def test_deflection_large_c_spectrum(c: float) -> None:
    basis = compute_basis(GpswfParams(alpha=0.0, c=c), 12)
    lam = np.exp(log_lambdas(basis))
    r = deflection(lam, 10, 0.01)
    assert r.case == "saturated"
    assert math.isfinite(r.bound)


@pytest.mark.parametrize(
    ("lam", "N", "eps2"),
    [
        ([0.9, 0.5], 1, 0.0),
        ([0.9, 0.5], 1, 1.0),
        ([0.9, 0.5], 2, 0.1),
        ([0.5, 0.9], 1, 0.1),
        ([0.5, 0.5, 0.5], 2, 0.1),
    ],
)
def test_deflection_rejects(lam: list[float], N: int, eps2: float) -> None:
    with pytest.raises(DomainError):
        deflection(lam, N, eps2)


def test_deflection_sweep_legendre_c10() -> None:
    basis = compute_basis(GpswfParams(alpha=0.0, c=10.0), 30)
    lam = np.exp(log_lambdas(basis))
    for eps2 in (0.01, 0.125, 0.5):
        values = [deflection(lam, N, eps2) for N in range(1, 31)]
        for r in values:
            assert 0.0 <= r.deflection <= max(1.0, r.bound)
        seq = [r.deflection for r in values]
        assert all(a >= b for a, b in zip(seq, seq[1:], strict=False))
        assert values[-1].case != "saturated"


def test_resolution_warning(legendre_c5: GpswfBasis) -> None:
    rule = gauss_jacobi(0.0, 2 * legendre_c5.matrix_size)
    with pytest.warns(ResolutionWarning):
        rep = project(legendre_c5, sinc_signal(2000.0), 10, rule)
    assert rep.warnings and "under-resolved" in rep.warnings[0]


def test_project_rejects(legendre_c5: GpswfBasis) -> None:
    f = sinc_signal(2.0)
    with pytest.raises(PreconditionError):
        project(legendre_c5, f, legendre_c5.count)
    with pytest.raises(DomainError):
        project(legendre_c5, f, 4, gauss_jacobi(0.5, 2 * legendre_c5.matrix_size))
    with pytest.raises(PreconditionError):
        project(legendre_c5, f, 4, gauss_jacobi(0.0, legendre_c5.matrix_size))
    with pytest.raises(DomainError):
        project(legendre_c5, f, 4, lambda_n=1.0)


@pytest.mark.slow
def test_sobolev_example() -> None:
    c = 5.0 * math.pi
    basis = compute_basis(GpswfParams(alpha=0.0, c=c), 90)
    f = sobolev_signal(1.0, 42, 1000)
    rule = projection_rule(basis, f)
    errs = [project(basis, f, N, rule).err_weighted_l2 for N in (10, 30, 50, 70, 90)]
    norm = project(basis, f, 0, rule).signal_norm
    assert all(a > b for a, b in zip(errs, errs[1:], strict=False))
    assert errs[-1] <= 0.25 * norm


@pytest.mark.slow
def test_sobolev_example_median_over_seeds() -> None:
    # measured median of err_90 / ||f|| over seeds 0..7 is about 0.144
    basis = compute_basis(GpswfParams(alpha=0.0, c=5.0 * math.pi), 90)
    ratios = []
    for seed in range(8):
        f = sobolev_signal(1.0, seed, 1000)
        rep = project(basis, f, 90, projection_rule(basis, f))
        ratios.append(rep.err_weighted_l2 / rep.signal_norm)
    assert float(np.median(ratios)) <= 0.2
    assert max(ratios) < 0.5


@pytest.mark.slow
@pytest.mark.parametrize("s", [0.5, 1.0])
def test_sobolev_decay_constant(s: float) -> None:
    basis = compute_basis(GpswfParams(alpha=0.0, c=5.0 * math.pi), 90)
    rep = sobolev_decay_constants(basis, s, tuple(range(8)), (50, 70, 90))
    assert rep.constants.shape == (8,)
    # the inequality holds with constant 1 once N is well past c
    assert np.all(rep.constants > 0.0) and np.all(rep.constants <= 1.0)
    assert rep.spread <= 2.0 * DECAY_CONSTANT_RTOL


def test_sobolev_decay_constants_rejects(legendre_c5: GpswfBasis) -> None:
    with pytest.raises(DomainError):
        sobolev_decay_constants(legendre_c5, 1.0, (), (4,))
    with pytest.raises(PreconditionError):
        sobolev_decay_constants(legendre_c5, 1.0, (0,), (legendre_c5.count,))
    assert sobolev_decay_shape(0, 1.0) == 1.0
    assert sobolev_decay_shape(4, 2.0) == pytest.approx(1.0 / 5.0**2)
