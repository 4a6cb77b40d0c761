"""Exception types shared across the package."""


class GbhError(Exception):
    """Base class for every error raised by this package."""


class LengthMismatch(GbhError):
    """A flat array does not match the layout's total size."""


class OutOfRange(GbhError):
    """A value lies outside its permitted interval."""


class LayoutMismatch(GbhError):
    """Two containers were built against different layouts."""


class VariantMismatch(GbhError):
    """A weight variant is incompatible with the layout kind."""


class UnequalCells(GbhError):
    """An equal-cell-size variant was applied to a ragged grid."""


class BadLambda(GbhError):
    """The tuning threshold must lie strictly inside (0, 1)."""


class BadAlpha(GbhError):
    """A significance level must lie strictly inside (0, 1)."""


class EmptyGroup(GbhError):
    """A group-level estimator received no p-values."""
