"""Exception hierarchy shared by every module."""


class HolocorrError(Exception):
    """Base class for all package errors."""


class RootSolveError(HolocorrError):
    """Polynomial root iteration failed to converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class NotDivisibleError(HolocorrError):
    pass


class DegenerateResultantError(HolocorrError):
    """The resultant vanishes identically: the inputs share a factor."""


class SingularPointError(HolocorrError):
    """Both partial derivatives vanish: the point is singular on the curve."""


class NotOnCurveError(HolocorrError):
    pass


class BudgetExceededError(HolocorrError):
    pass


class DegenerateGrowthError(HolocorrError):
    """Level sums do not determine a growth rate (zero tails, flat rho, ...)."""


class InvalidBracketError(HolocorrError):
    pass


class NonMonotoneError(HolocorrError):
    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = samples or []


class BranchError(HolocorrError):
    """No single-valued injective branch exists over the requested region."""


class NotIndifferentError(HolocorrError):
    pass


class WrongDirectionError(HolocorrError):
    pass


class NotFixedError(HolocorrError):
    pass
