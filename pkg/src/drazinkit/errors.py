"""Exception hierarchy shared by every drazinkit module."""


class DrazinKitError(Exception):
    """Base class for all errors raised by drazinkit."""


class ZeroDenominator(DrazinKitError, ZeroDivisionError):
    pass


class NotAUnit(DrazinKitError, ZeroDivisionError):
    pass


class InvalidDomain(DrazinKitError, ValueError):
    """Malformed domain descriptor (bad modulus, composite "prime", ...)."""


class DimensionMismatch(DrazinKitError, ValueError):
    pass


class DomainMismatch(DrazinKitError, ValueError):
    pass


class NotSquare(DrazinKitError, ValueError):
    pass


class UnsupportedDomain(DrazinKitError, ValueError):
    """The operation needs a field (or some other structure) the domain lacks."""


class Singular(DrazinKitError, ArithmeticError):
    pass


class Inconsistent(DrazinKitError, ArithmeticError):
    """A linear system ``a X = b`` has no solution."""


class ParseError(DrazinKitError, ValueError):
    pass


class NotDrazinInvertible(DrazinKitError, ArithmeticError):
    pass


class NoGroupInverse(DrazinKitError, ArithmeticError):
    pass


class ContextTooLarge(DrazinKitError, ValueError):
    pass


class NonIdempotentInput(DrazinKitError, ValueError):
    pass


class NotAProjector(DrazinKitError, ValueError):
    pass


class NotStarReducing(DrazinKitError, ValueError):
    pass


class SixNotInvertible(DrazinKitError, ValueError):
    pass


class PreconditionViolated(DrazinKitError, ValueError):
    """A theorem's hypothesis does not hold for the given input.

    ``witness`` carries the offending element when there is one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RetryLimitExceeded(DrazinKitError, RuntimeError):
    pass


class EngineError(DrazinKitError, AssertionError):
    """Internal consistency failure: a computed result broke its own axioms."""


class IdentityViolation(DrazinKitError, AssertionError):
    """A closed-form identity disagreed with the axioms or with the engine.

    ``equation`` is a short id such as ``"T3.5(3)"``.
    """

    def __init__(self, equation, detail=""):
        msg = equation if not detail else f"{equation}: {detail}"
        super().__init__(msg)
        self.equation = equation
        self.detail = detail
