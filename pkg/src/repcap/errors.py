"""Exception types raised across repcap."""


class RepcapError(Exception):
    """Base class for all repcap errors."""


class InvalidDistribution(RepcapError, ValueError):
    pass


class AbsoluteContinuityViolated(RepcapError, ValueError):
    """p has mass where q has none, so D(p||q) is infinite."""


class NotErgodic(RepcapError, ValueError):
    pass


class NotConverged(RepcapError, RuntimeError):
    """An iterative solver hit max_iter. ``result`` holds the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class EnumerationTooLarge(RepcapError, ValueError):
    pass


class InvalidParams(RepcapError, ValueError):
    pass


class InsufficientRate(RepcapError, ValueError):
    """The embedding space has fewer points than the typical set."""

    def __init__(self, message, typical_size=None, capacity_bits=None):
        super().__init__(message)
        self.typical_size = typical_size
        self.capacity_bits = capacity_bits


class DimensionMismatch(RepcapError, ValueError):
    pass


class EmptyClass(RepcapError, ValueError):
    pass


class DegenerateMeans(RepcapError, ValueError):
    pass


class MissingTargets(RepcapError, ValueError):
    pass


class InvalidInputs(RepcapError, ValueError):
    pass
