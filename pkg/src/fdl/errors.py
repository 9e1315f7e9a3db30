"""Exception hierarchy shared by every module.

The CLI maps ``ValidationError`` to exit status 2 and ``CapExceeded`` to 3.
"""


class FdlError(Exception):
    pass


class ValidationError(FdlError, ValueError):
    """Input violates a documented precondition."""


class CapExceeded(FdlError):
    """A configured size or search bound was hit."""


class WordSyntaxError(ValidationError):
    pass


class NonFreeFactorWord(ValidationError):
    """Word contains barred letters where only ``a``/``b`` are allowed."""


class UnreducedWord(ValidationError):
    pass


class NonIntegralRatio(ValidationError):
    pass


class BoundedSequence(ValidationError):
    pass


class InvalidSequence(ValidationError):
    pass


class NotPrime(ValidationError):
    pass


class NotAMember(ValidationError):
    pass


class AlreadyMember(ValidationError):
    pass


class EqualSequences(ValidationError):
    pass


class IllDefinedMap(ValidationError):
    pass


class SizeCap(CapExceeded):
    pass


class FactorizationLimit(CapExceeded):
    pass


class NotFoundWithinBound(CapExceeded):
    pass
