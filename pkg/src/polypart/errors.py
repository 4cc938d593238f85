"""Exception hierarchy shared by every polypart module."""

from __future__ import annotations


class PolyPartError(Exception):
    """Base class for all library errors."""


# polynomial input and analysis
class DegreeTooSmall(PolyPartError, ValueError):
    pass


class NonPositiveLeading(PolyPartError, ValueError):
    pass


class GcdViolation(PolyPartError, ValueError):
    pass


class RootFindingFailed(PolyPartError, ArithmeticError):
    pass


class ComplexRoot(PolyPartError, ValueError):
    pass


class NegativeRootBelowMinusOne(PolyPartError, ValueError):
    pass


class OutOfRange(PolyPartError, ValueError):
    pass


# exact counting
class GuardExceeded(PolyPartError, ValueError):
    pass


class MemoryCapExceeded(PolyPartError, MemoryError):
    pass


# special functions
class PoleAtOne(PolyPartError, ZeroDivisionError):
    pass


class PoleAtNonpositiveInteger(PolyPartError, ZeroDivisionError):
    pass


class DomainError(PolyPartError, ValueError):
    pass


class NonConvergence(PolyPartError, ArithmeticError):
    pass


class BranchError(PolyPartError, ValueError):
    pass


class IntegerS(PolyPartError, ValueError):
    pass


class OrderMismatch(PolyPartError, ValueError):
    pass


class NonzeroConstantTerm(PolyPartError, ValueError):
    pass


class QuadratureFailure(PolyPartError, ArithmeticError):
    pass


# twisted multiple zeta
class NegativeAlpha(PolyPartError, ValueError):
    pass


class NearPole(PolyPartError, ZeroDivisionError):
    pass


class InsufficientDepth(PolyPartError, ValueError):
    pass


class ClosedFormMismatch(PolyPartError, ArithmeticError):
    pass


class DerivativeMismatch(PolyPartError, ArithmeticError):
    pass


# generating-log evaluation
class TailTooLarge(PolyPartError, ArithmeticError):
    pass


class RatioNotLessThanOne(PolyPartError, ValueError):
    pass


class NonConvergentSeries(PolyPartError, ArithmeticError):
    pass


class ThetaOutOfRange(PolyPartError, ValueError):
    pass


# saddle point
class NoBracket(PolyPartError, ValueError):
    pass


class AdmissibleRangeWarning(UserWarning):
    """Raised (as a warning) when J lies outside 1 < J < dR."""


# arcs and exponential sums
class QuadratureBudgetExceeded(PolyPartError, ArithmeticError):
    pass


class OverlapDetected(PolyPartError, ArithmeticError):
    pass
