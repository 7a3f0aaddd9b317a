"""
## Exception and warning hierarchy for gpswf_core.

Why: callers (and the CLI) can tell a bad argument from a numerical failure without
parsing messages.

    GpswfError
      DomainError        (ValueError)       argument outside the mathematical domain
      RangeError         (ValueError)       argument outside the supported numerical envelope
      PreconditionError  (ValueError)       caller-side precondition (node counts, sizes)
      NumericalError     (ArithmeticError)  iteration failure, parity/phase violations
        TruncationError                     Jacobi expansion tail never became small enough

    ResolutionWarning (UserWarning)         quadrature does not resolve a signal

*Tested by: tests/test_errors.py*
"""

from __future__ import annotations


class GpswfError(Exception):
    """Root of every error raised by this package."""


class DomainError(GpswfError, ValueError):
    """Argument outside the function's mathematical domain."""


class RangeError(GpswfError, ValueError):
    """Argument inside the domain but outside the supported accuracy envelope."""


class PreconditionError(GpswfError, ValueError):
    """A documented precondition on sizes or counts was not met."""


class NumericalError(GpswfError, ArithmeticError):
    """A numerical procedure failed or produced an inconsistent result."""


class TruncationError(NumericalError):
    """The Jacobi expansion tail stayed above tolerance after all retries."""

    def __init__(self, message: str, *, worst_tail: float, matrix_size: int) -> None:
        super().__init__(message)
        self.worst_tail = worst_tail
        self.matrix_size = matrix_size


class ResolutionWarning(UserWarning):
    """Quadrature nodes too coarse for the signal (coefficient tail not decaying)."""
