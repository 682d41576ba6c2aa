"""Exception hierarchy shared across the package."""


class RamanQCError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(RamanQCError):
    """A data file could not be parsed or failed validation."""


class GridMismatchError(IngestionError):
    """Profiles in one dataset do not share an identical shift grid."""


class InsufficientDataError(RamanQCError):
    """An operation was given fewer observations/samples than it requires."""


class UndefinedNormalizationError(RamanQCError):
    """Similarity normalization is undefined (an all-zero profile)."""


class DegenerateGeometryError(RamanQCError):
    """Clustering input has no geometry to separate (all points identical)."""
