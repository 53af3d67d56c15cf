"""Exception hierarchy shared by every module in the package."""


class FblecError(Exception):
    """Base class for all package errors."""


class DomainError(FblecError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class ConvergenceError(FblecError, ArithmeticError):
    """An iterative scheme did not reach its tolerance within the budget."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature could not attain the requested tolerance."""


class NumericalInstability(FblecError, ArithmeticError):
    """Catastrophic cancellation detected in a closed-form evaluation."""


class NotUnimodal(FblecError, ArithmeticError):
    """Objective is not unimodal on the search interval."""


class DegenerateAlpha(DomainError):
    """alpha is within 1e-9 of +1 or -1, where the asymptotic terms blow up."""


class InfeasibleEc(FblecError, ValueError):
    """Requested effective capacity is at or above the high-SNR bound."""


class InfeasibleConstraint(FblecError, ValueError):
    """The high-SNR asymptotic coefficient is non-positive; no valid root exists."""
