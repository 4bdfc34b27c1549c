class FPracticalError(Exception):
    """
    Base class for every error raised by the f-practical services.
    """


class InvalidInputError(FPracticalError, ValueError):
    """
    Raised when an argument is outside the domain an operation accepts.
    """


class UnknownFunctionError(InvalidInputError):
    """
    Raised when a function selector does not name a catalog entry.
    """


class MissingParameterError(InvalidInputError):
    """
    Raised when a parametrised catalog family (v_p, f_m) is selected without its parameter.
    """


class LimitExceededError(InvalidInputError):
    """
    Raised when a request exceeds a sieve limit or a dynamic-programming bound.
    """


class UnknownSuiteError(InvalidInputError):
    """
    Raised when a verification suite name is not registered.
    """


class SfOverflowError(FPracticalError, OverflowError):
    """
    Raised when a divisor sum or subset-sum total leaves the 128-bit range.
    """


class ContractViolationError(FPracticalError, AssertionError):
    """
    Raised when a caller-checked precondition turns out to be false during computation.
    """


class TargetNotFoundError(FPracticalError, LookupError):
    """
    Raised when a bounded search finishes without a result.
    """
