"""Exception hierarchy shared by every module."""


class HunccError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class FieldError(HunccError):
    pass


class FieldMismatchError(FieldError):
    pass


class DimensionError(HunccError):
    pass


class SingularMatrixError(HunccError):
    pass


class InconsistentSystemError(HunccError):
    pass


class SecrecyViolation(HunccError):
    """Raised when a generator matrix leaks some message symbol.

    ``witness`` is the ``(omega, j)`` pair (0-based) that failed the rank test.
    """

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ParameterError(HunccError):
    pass


class DecodingFailure(HunccError):
    """The Goppa decoder could not correct the received word."""

    def __init__(self, msg, block=None, path=None):
        super().__init__(msg)
        self.block = block
        self.path = path


class PaddingError(HunccError):
    pass


class FormatError(HunccError):
    pass
