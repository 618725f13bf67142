"""Exceptions raised by the RIS allocation simulator."""

# Third Party
from numpy.linalg import LinAlgError


class RisSimError(Exception):
    """Base class for every error raised by this package."""


class InvalidGeometryError(RisSimError, ValueError):
    """Positions are non-finite or the node counts/tiers break an invariant."""


class DegenerateDistanceError(InvalidGeometryError):
    """A link has zero length, so free-space path loss is undefined."""


class DegenerateChannelError(RisSimError, ValueError):
    """A channel entry has zero magnitude and carries no phase to align."""


class ShapeError(RisSimError, ValueError):
    """Operand dimensions do not agree."""


class SingularChannelError(RisSimError, LinAlgError):
    """The stacked channel matrix is not full row rank."""


class InvalidNoiseError(RisSimError, ValueError):
    """Noise power must be strictly positive."""


class InvalidInputError(RisSimError, ValueError):
    """Generic precondition failure on numeric inputs."""


class InvalidAssociationError(RisSimError, ValueError):
    """An association is not a one-to-one device/RIS matching."""


class ProblemTooLargeError(RisSimError, ValueError):
    """Exhaustive search was requested for an instance above the size guard."""


class TrialFailedError(RisSimError):
    """Every geometry draw for a trial produced a singular channel."""

    def __init__(self, trial_index: int, seed: int, attempts: int):
        self.trial_index = trial_index
        self.seed = seed
        self.attempts = attempts
        super().__init__(f"Trial {trial_index} (seed {seed}) failed after {attempts} geometry draws")


class ConfigParseError(RisSimError, ValueError):
    """The config file could not be read as key-value text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ConfigValidationError(RisSimError, ValueError):
    """A parsed config value breaks an invariant."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
