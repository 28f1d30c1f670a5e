"""Exception types shared across the package."""


class EtaSpanError(Exception):
    """Base class for errors raised by etaspan."""


class InvalidArgument(EtaSpanError, ValueError):
    pass


class PreconditionViolation(EtaSpanError):
    """A computation was requested outside the hypotheses it is valid under."""


class FractionalValuationError(EtaSpanError, ValueError):
    """The q^(1/24) prefactor of an eta-quotient is not an integral power of q."""


class RecognitionFailure(EtaSpanError):
    """A q-series could not be identified as an integer multiple of an eta-quotient.

    ``index`` is the position (in ascending divisor order, or the coefficient
    exponent for verification mismatches) where the construction broke down.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InvariantViolation(EtaSpanError, RuntimeError):
    """An internal consistency check failed; this indicates a bug."""
