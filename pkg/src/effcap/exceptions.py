"""Exception types shared across the library."""


class DomainError(ValueError):
    """A parameter lies outside its mathematical domain."""


class MethodValidityError(ValueError):
    """A requested evaluation method does not apply to these parameters."""


class UnsupportedParametersError(MethodValidityError):
    """Parameters outside a method's supported class.

    Raised by the closed-form evaluator and the Monte Carlo sampler for
    non-integer fading orders; the message points callers at the
    quadrature path, which has no such restriction.
    """


class ConvergenceError(RuntimeError):
    """An iterative evaluation failed to reach its tolerance.

    Carries the best available estimate and the achieved relative error so
    callers can decide whether the degraded result is still usable.
    """

    def __init__(self, message: str, best_estimate: float, achieved: float, target: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved = achieved
        self.target = target
