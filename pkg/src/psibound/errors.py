"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain an operation is defined on."""


class ToleranceError(RuntimeError):
    """Requested tolerance could not be reached within the escalation cap.

    Carries the best enclosure found so callers can still inspect it.
    """

    def __init__(self, message, best=None, plan=None):
        super().__init__(message)
        self.best = best
        self.plan = plan
