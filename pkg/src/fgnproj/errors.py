"""Exception hierarchy shared by all fgnproj modules."""


class FGNError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FGNError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NotApplicable(FGNError):
    """The requested check has no content for this Hurst index (e.g. H = 1/2)."""


class SingularRegime(FGNError):
    """H = 1: every increment equals the same N(0, 1) variable, the covariance matrix is singular."""


class FactorizationFailure(FGNError):
    """A Cholesky pivot was not strictly positive."""


class OrderTooLarge(FGNError, ValueError):
    pass


class OrderTooHigh(FGNError, ValueError):
    pass


class DegenerateDenominator(FGNError):
    """The prediction-error variance collapsed to (numerically) zero."""


class DegenerateC0(FGNError):
    pass


class IllConditioned(FGNError):
    pass
