"""Exception hierarchy shared by all imra modules."""


class ImraError(Exception):
    """Base class for all errors raised by this package."""


class OrderUnsupportedError(ImraError):
    """Requested Deslauriers-Dubuc order is outside the supported range."""


class InvalidFilterError(ImraError):
    """A mask violates the interpolating-filter preconditions."""


class ResolutionError(ImraError):
    """A dyadic point is finer than the supported resolution budget."""


class ResourceError(ImraError):
    """A table or grid would exceed the configured resource limits."""


class ShapeError(ImraError):
    """Grid boxes or dimensions are inconsistent."""


class LevelTooDeepError(ImraError):
    """Coarsening emptied a grid box."""


class ParameterError(ImraError):
    """A numeric parameter is outside its documented domain."""


class GridEvaluationError(ImraError):
    """Evaluating a user function failed at a lattice point."""

    def __init__(self, point, cause):
        super().__init__(f"evaluation failed at lattice point {point}: {cause}")
        self.point = point


class FileFormatError(ImraError):
    """A grid or pyramid file has a malformed header."""


class TruncatedPayloadError(ImraError):
    """A grid file payload is shorter than its header promises."""


class PayloadValueError(ImraError):
    """A grid file payload contains non-finite values."""
