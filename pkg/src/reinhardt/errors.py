"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's preconditions."""


class NumericalFailureError(RuntimeError):
    """A numerical routine could not meet its accuracy contract.

    Carries the best available estimate and the achieved error so callers
    can decide whether to retry with different settings.
    """

    def __init__(self, message, best_estimate=None, achieved_error=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved_error = achieved_error
