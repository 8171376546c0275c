"""Exception types shared across the package."""


class ClicksegError(Exception):
    """Base class for every error this package raises on purpose."""


class ValidationError(ClicksegError):
    """An input array or parameter fails a structural requirement."""


class SeedOutOfBoundsError(ClicksegError):
    """A click-point lies outside the image grid."""

    def __init__(self, seed, shape):
        self.seed = (int(seed[0]), int(seed[1]))
        self.shape = tuple(shape)
        super().__init__(
            f"seed {self.seed} is outside an image of {self.shape[0]}x{self.shape[1]} pixels"
        )


class SeedOnBarrierError(ClicksegError):
    """A click-point landed on a barrier pixel, so there is nothing to fill."""

    def __init__(self, seed):
        self.seed = (int(seed[0]), int(seed[1]))
        super().__init__(f"seed {self.seed} lies on a barrier pixel")


class NonSquareRotationError(ClicksegError):
    """A 90/270 degree rotation was requested for a non-square raster."""


class DimensionMismatchError(ClicksegError):
    """Two rasters that must share a shape do not."""


class EmptyInputError(ClicksegError):
    """An operation that needs at least one element got none."""


class UndefinedMetricError(ClicksegError):
    """The metric's denominator vanishes for this confusion matrix."""


class OutOfScaleDomainError(ClicksegError):
    """A value falls outside the domain a grading scale covers."""


class IoFailure(ClicksegError):
    """Reading or writing a file failed."""


class SerializationFailure(ClicksegError):
    """A project could not be encoded as a document."""


class SchemaViolation(ClicksegError):
    """A project document is malformed or breaks an invariant."""


class StaleReference(ClicksegError):
    """A project document points at a raster file that no longer exists."""


class UnknownImageError(ClicksegError):
    """An image id is not registered in the project."""
