"""Exception types shared across the package."""


class OmniMorphError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(OmniMorphError, ValueError):
    pass


class NonConvergenceError(OmniMorphError):
    """Raised when an iterative solver hits its iteration cap.

    The best iterate found so far is attached as ``best``.
    """

    def __init__(self, message, best=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class HoverDeficitError(OmniMorphError):
    """The requested hover wrench is outside the span of the allocation matrix."""

    def __init__(self, message, deficit):
        super().__init__(message)
        self.deficit = deficit


class ControllerFault(OmniMorphError):
    pass


class SimulationDiverged(OmniMorphError):
    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time
