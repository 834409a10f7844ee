"""Exception types shared across the package."""


class PartialSearchError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PartialSearchError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GeometryError(DomainError):
    """Invalid database geometry (non-divisible partition, too few items)."""


class InvalidStateError(PartialSearchError, ValueError):
    """A state failed its normalization precondition."""


class CapacityError(PartialSearchError):
    """A full-vector simulation was requested beyond the configured size cap."""


class SubspaceViolationError(PartialSearchError):
    """A full state is not constant within the three symmetry classes.

    Carries the largest within-class deviation in ``max_deviation``.
    """

    def __init__(self, message: str, max_deviation: float):
        super().__init__(message)
        self.max_deviation = max_deviation


class NoRootError(PartialSearchError):
    """No sign change was found while bracketing a root."""


class ScheduleModeError(PartialSearchError):
    """A real-valued schedule was used where operator powers are required."""


class ToleranceError(PartialSearchError):
    """Recomputed values deviate from their reference beyond tolerance."""
