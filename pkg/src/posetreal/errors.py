"""Exception types raised across the package."""


class PosetError(Exception):
    """Base class for all package errors."""


class DirectedCycle(PosetError):
    def __init__(self, path):
        self.path = list(path)
        super().__init__("directed cycle: " + " -> ".join(map(repr, self.path)))


class LabelClash(PosetError):
    pass


class NotMonotone(PosetError):
    def __init__(self, u, v):
        self.witness = (u, v)
        super().__init__(f"map is not monotone on {u!r} <= {v!r}")


class NotInjective(PosetError):
    pass


class SizeBound(PosetError):
    pass


class BaseMismatch(PosetError):
    pass


class NotInRealization(PosetError):
    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)


class NotCovered(PosetError):
    pass


class NotStarRefinement(PosetError):
    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)


class ZeroLebesgue(PosetError):
    pass


class InvalidMetric(PosetError):
    pass


class PreconditionFailed(PosetError):
    pass


class DeltaNotGrid(PosetError):
    pass


class TooFar(PosetError):
    pass
