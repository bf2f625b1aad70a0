"""Exception types shared across the package."""


class CropqError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(CropqError, ValueError):
    """Invalid configuration: bad dimensions, unknown options, missing files."""


class DomainError(CropqError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ValidationError(CropqError, ValueError):
    """A data record violates an invariant (e.g. tmax < tmin, negative rain)."""


class ParseError(CropqError, ValueError):
    """A structured text file could not be parsed."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
        if line is not None:
            loc += f"{line}: "
        elif path is not None:
            loc += " "
        super().__init__(f"{loc}{message}")
        self.path = path
        self.line = line


class StateError(CropqError, RuntimeError):
    """Operation called in an invalid state (e.g. step() after terminal)."""


class TrainingDivergedError(CropqError, RuntimeError):
    """Training aborted on a non-finite loss.

    Carries the last finite loss and, when available, the last good
    parameter snapshot so callers can recover.
    """

    def __init__(self, message: str, last_loss: float | None = None, snapshot=None):
        super().__init__(message)
        self.last_loss = last_loss
        self.snapshot = snapshot
