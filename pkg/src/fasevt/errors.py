"""Exception hierarchy shared by all modules."""


class FasEvtError(Exception):
    """Base class for errors raised by this package."""


class DomainError(FasEvtError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConfigurationError(FasEvtError, ValueError):
    """Invalid system configuration (port count, aperture, SNRs)."""


class DegenerateDataError(FasEvtError, ValueError):
    """Sample too small or without spread to be fitted."""


class SurrogateRangeError(FasEvtError, ValueError):
    """(N, W) outside the box the surrogate polynomials were fitted on."""


class NumericError(FasEvtError, ArithmeticError):
    """A numerical routine failed (e.g. the eigensolver did not converge)."""


class ConvergenceError(FasEvtError, RuntimeError):
    """An estimator ran out of iterations; ``report`` holds the best point found."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
