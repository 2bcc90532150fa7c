"""Exception hierarchy shared by every module of the package."""


class ChudnovskyError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(ChudnovskyError, ValueError):
    pass


class ReducibleModulus(ChudnovskyError, ValueError):
    pass


class DegreeMismatch(ChudnovskyError, ValueError):
    pass


class ConfigMismatch(ChudnovskyError, ValueError):
    """Operands live in different fields."""


class DivisionByZero(ChudnovskyError, ZeroDivisionError):
    pass


class NotMonic(ChudnovskyError, ValueError):
    pass


class InfinitePlaceHasNoQuotientRepresentation(ChudnovskyError, ValueError):
    """The place at infinity has no minimal polynomial; use the leading-coefficient path."""


class DegreeTooLarge(ChudnovskyError, ValueError):
    pass


class PreconditionSmallN(ChudnovskyError, ValueError):
    pass


class Infeasible(ChudnovskyError, ValueError):
    pass


class UnsupportedMultiplicity(ChudnovskyError, ValueError):
    pass


class InvalidSpec(ChudnovskyError, ValueError):
    """An interpolation specification violates one of its invariants."""


class SingularEvaluation(ChudnovskyError, ArithmeticError):
    pass


class QInSupport(ChudnovskyError, ValueError):
    pass


class NoIrreducibleFound(ChudnovskyError, RuntimeError):
    pass


class SchemaViolation(ChudnovskyError, ValueError):
    pass


class FieldMismatch(ChudnovskyError, ValueError):
    pass


class BaseOutOfRange(ChudnovskyError, ValueError):
    pass


class VerificationFailure(ChudnovskyError, AssertionError):
    """A compiled product disagreed with the schoolbook oracle."""

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.x = x
        self.y = y
