"""Exception types used across the package."""


class LevyLabError(Exception):
    """Base class for all levylab errors."""


class LengthMismatch(LevyLabError, ValueError):
    """Sequences that must align index-by-index have different lengths."""


class InvalidFunctionTable(LevyLabError, ValueError):
    """A function table contains non-finite values."""


class InvalidSpace(LevyLabError, ValueError):
    """Distance matrix or measure vector violates a construction invariant."""


class InvalidMeasure(LevyLabError, ValueError):
    """Weights are not a probability vector over a distinct support."""


class InvalidSchedule(LevyLabError, ValueError):
    """Schedule entries violate the monotone-hypothesis invariants."""


class NegativeEps(LevyLabError, ValueError):
    """A radius that must be >= 0 is negative."""


class NonPositiveEps(LevyLabError, ValueError):
    """A radius that must be > 0 is zero or negative."""


class SpaceTooLarge(LevyLabError):
    """Point count exceeds the exact subset-enumeration limit."""


class TooLargeForExact(LevyLabError):
    """Product enumeration would exceed the exact-mode cap."""


class GridBlowup(LevyLabError):
    """A common-refinement grid would exceed the grid cap."""


class EmptyTuple(LevyLabError, ValueError):
    """A step map needs at least one cell."""


class InvalidElement(LevyLabError, ValueError):
    """Value is not an element of the given group."""


class WrongKind(LevyLabError, TypeError):
    """Operation requires a different group kind."""


class CarrierMismatch(LevyLabError, TypeError):
    """Objects live over different carriers (groups or step-map spaces)."""


class DimensionMismatch(LevyLabError, ValueError):
    """Tuple lengths/indices are inconsistent with the requested embedding."""


class OutOfRange(LevyLabError):
    """A member evaluation escaped its declared bound (misdeclared family)."""


class LipschitzViolation(LevyLabError):
    """A sampled pair violates the declared Lipschitz constant."""
