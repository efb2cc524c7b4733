"""Exception hierarchy shared by every module."""


class RmxError(Exception):
    """Base class for all library errors."""


class DomainError(RmxError, ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(RmxError, ZeroDivisionError):
    """A denominator fell below the pole floor."""


class NonConvergent(RmxError, ArithmeticError):
    """A series, product or quadrature could not reach its tolerance."""


class DimensionError(RmxError, ValueError):
    """Operand shapes are incompatible."""


class ConvergenceViolation(RmxError):
    """A limit scan produced a non-decreasing error."""
