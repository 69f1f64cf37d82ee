"""Exception hierarchy.

Two branches matter for the CLI exit codes: ``InputError`` (malformed or
inconsistent input data, exit code 1) and ``NumericalError`` (a
value-dependent precondition or margin search failed, exit code 2).
"""

from __future__ import annotations

__all__ = [
    "HsDecompError",
    "InputError",
    "HypothesisViolatedError",
    "NumericalError",
    "NotSelfadjointError",
    "NotPositiveError",
    "NotPositiveDefiniteError",
    "NotInnerProductError",
    "DegenerateFactorError",
    "NoProgressError",
    "CertificateInvalidError",
]


class HsDecompError(Exception):
    """Base class for all library errors."""


class InputError(HsDecompError, ValueError):
    """Malformed input: bad schema, mismatched dimensions, bad indices."""


class HypothesisViolatedError(InputError):
    """A constructor hypothesis failed; carries the offending term index."""

    def __init__(self, message: str, index: int | None = None, reason: str = ""):
        super().__init__(message)
        self.index = index
        self.reason = reason or message


class NumericalError(HsDecompError, RuntimeError):
    """A value-dependent precondition or a numerical search failed."""


class NotSelfadjointError(NumericalError):
    """Operator required to be selfadjoint is not (within tolerance)."""


class NotPositiveError(NumericalError):
    """Operator required to be non-negative is not (within tolerance)."""


class NotPositiveDefiniteError(NumericalError):
    """Operator required to be positive definite is not (within tolerance)."""


class NotInnerProductError(NumericalError):
    """A form that must be an inner product failed to classify as one."""


class DegenerateFactorError(NumericalError):
    """A factor is numerically zero where a nonzero one is required."""


class NoProgressError(NumericalError):
    """A shrink/margin search stalled; carries the partial trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class CertificateInvalidError(NumericalError):
    """A zeta certificate failed validation; carries the check report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
