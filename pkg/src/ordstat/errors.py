"""Exception hierarchy shared by the whole package.

Every public function raises one of these instead of bare ValueError so
callers (and the CLI exit-code mapping) can tell apart bad inputs, domain
violations, overflow, unmet mathematical preconditions and numerical
failures.
"""


class OrdstatError(Exception):
    """Base class for all errors raised by this package."""


class InputError(OrdstatError, ValueError):
    """An argument is malformed: wrong range, wrong shape, non-finite."""


class DomainError(OrdstatError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class RangeError(OrdstatError, OverflowError):
    """The result would overflow the floating-point range."""


class PreconditionError(OrdstatError):
    """A mathematical precondition does not hold (e.g. a bound is asserted
    only for non-decreasing hazard rates and the family does not have one)."""


class UnsupportedError(OrdstatError):
    """The operation has no exact closed form for this family and none is
    adopted."""


class NumericalError(OrdstatError, ArithmeticError):
    """A numerical procedure failed to converge to its stated tolerance."""


class ConfigError(OrdstatError):
    """An experiment configuration or CLI invocation is invalid."""
