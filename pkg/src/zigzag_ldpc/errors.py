"""Exception hierarchy shared by all modules.

Every domain error derives from :class:`ZigzagError` so the CLI can map
them to exit code 1 in one place.
"""

from __future__ import annotations


class ZigzagError(Exception):
    """Base class for domain errors."""


# graph construction
class NonRegularError(ZigzagError):
    pass


class HalfLoopError(ZigzagError):
    pass


class NonBiregularError(ZigzagError):
    pass


class InconsistentCountsError(ZigzagError):
    pass


class EvenPowerError(ZigzagError):
    pass


class NonRegularOutDegreeError(ZigzagError):
    pass


class InvalidRotationError(ZigzagError):
    pass


# spectral
class EmptyGraphError(ZigzagError):
    pass


class DisconnectedError(ZigzagError):
    pass


class NoConvergenceError(ZigzagError):
    pass


# products
class SizeMismatchError(ZigzagError):
    pass


class DegreeIncompatibleError(ZigzagError):
    pass


class OutOfRangeError(ZigzagError):
    pass


# cayley
class InvalidElementError(ZigzagError):
    pass


class NonSymmetricError(ZigzagError):
    pass


# codes
class UnknownCodeError(ZigzagError):
    pass


class DegreeMismatchError(ZigzagError):
    pass


class TooLargeError(ZigzagError):
    pass


class LengthMismatchError(ZigzagError):
    pass


# iteration
class LevelBudgetError(ZigzagError):
    pass


class DivergentError(ZigzagError):
    pass
