"""
Package entrypoint.

Generalized prolate spheroidal wave functions: basis, spectra, bound checks, projections.
"""

from gpswf_core.approx import deflection, project
from gpswf_core.basis import GpswfBasis, GpswfParams, compute_basis, eval_psi, eval_psi_grid
from gpswf_core.bounds import BoundReport, verify_suite
from gpswf_core.errors import (
    DomainError,
    GpswfError,
    NumericalError,
    PreconditionError,
    RangeError,
    ResolutionWarning,
    TruncationError,
)
from gpswf_core.spectrum import SpectralTriple, compute_lambda, compute_mu, compute_spectrum

__all__ = [
    "BoundReport",
    "DomainError",
    "GpswfBasis",
    "GpswfError",
    "GpswfParams",
    "NumericalError",
    "PreconditionError",
    "RangeError",
    "ResolutionWarning",
    "SpectralTriple",
    "TruncationError",
    "compute_basis",
    "compute_lambda",
    "compute_mu",
    "compute_spectrum",
    "deflection",
    "eval_psi",
    "eval_psi_grid",
    "project",
    "verify_suite",
]
