"""Exception types shared across the library."""


class InterdictionError(Exception):
    """Base class for all library-specific errors."""


class GraphFormatError(InterdictionError):
    """Malformed graph file or construction arguments."""


class NotSymmetric(InterdictionError):
    """Matrix is not exactly symmetric as stored."""


class NegativeEntry(InterdictionError):
    """Matrix has a negative entry."""


class RowSumViolation(InterdictionError):
    """A row of a stochastic matrix does not sum to one within tolerance."""


class EdgeNotPresent(InterdictionError):
    """An interdicted edge does not exist in the conductance matrix."""


class SingularSystem(InterdictionError):
    """Shifted-Laplacian system could not be solved; the conductance
    pattern is disconnected or numerically singular."""


class Disconnected(InterdictionError):
    """Operation requires a connected network (or s-t connectivity)."""


class NotAFlow(InterdictionError):
    """Edge values violate flow conservation or the declared strength."""


class BudgetTooLarge(InterdictionError):
    """Edge budget is not strictly below the network edge-connectivity."""


class TooLarge(InterdictionError):
    """Brute-force enumeration would exceed the configured cap."""


class TooSmall(InterdictionError):
    """Generator parameters below the minimum instance size."""


class ResampleLimit(InterdictionError):
    """Random graph generator exhausted its resampling attempts."""
