"""Exception types shared across the toolkit."""


class LDOError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(LDOError):
    """Invalid input data (problem, trajectory, certificate, or config).

    ``path`` optionally points at the offending field of a parsed document,
    JSON-pointer style (e.g. ``/coefficients/tail/r``).
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class ConcavityError(LDOError):
    """A piecewise-linear function violates the concavity invariant."""
