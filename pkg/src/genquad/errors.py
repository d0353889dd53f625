"""Exception hierarchy shared by every genquad module."""


class GenquadError(Exception):
    """Base class for all library errors."""


class ValidationError(GenquadError, ValueError):
    """Input is structurally wrong (bad shape, wrong regime, malformed payload)."""


class CapabilityError(GenquadError):
    """A configured size bound was exceeded; the input is fine but too big."""


class TruncationError(GenquadError):
    """A truncated series is too shallow to answer the question asked."""

    def __init__(self, message, required_floor=None, floor=None):
        super().__init__(message)
        self.required_floor = required_floor
        self.floor = floor


class PreconditionError(GenquadError, ValueError):
    """A documented precondition does not hold (e.g. a nonzero Riccati residual)."""


class CertificationError(GenquadError):
    """A computed Puiseux branch failed its residual check."""


class ParseError(GenquadError, ValueError):
    """Syntax error in equation text."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
