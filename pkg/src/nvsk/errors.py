"""Exception types shared across the package."""


class NVSKError(Exception):
    """Base class for all package errors."""


class ParseError(NVSKError):
    """A descriptor file could not be parsed."""


class ValidationError(NVSKError, ValueError):
    """A value violates a documented invariant.

    The offending field name is kept on ``field``.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ReportIOError(NVSKError, OSError):
    """A report or sample file could not be written or read."""


class DomainError(NVSKError, ValueError):
    """Input lies outside the validity domain of a closed form."""


class NumericalError(NVSKError, ArithmeticError):
    """An iterative numerical method failed to converge."""


class NotDiagonalError(NVSKError, ValueError):
    """Transverse terms too large for the two-level reduction."""


class LinearizationError(NVSKError, ValueError):
    """The linearized fringe has zero slope at the working point."""


class DegenerateContrastError(NVSKError, ValueError):
    """Bright and dark photon numbers coincide; no spin information."""


class ZeroSlopeError(NVSKError, ValueError):
    """The Ramsey fringe slope vanishes at the requested phase."""


class IndeterminateError(NVSKError, ValueError):
    """Numerator and denominator vanish together (0/0)."""
