"""Exception types shared across the package."""


class DelPezzoError(Exception):
    """Base class for all errors raised by dpdescent."""


class ValidationError(DelPezzoError, ValueError):
    """Malformed input: bad degree, wrong dimensions, generator outside W, bad job document.

    ``path`` locates the offending field in a job document when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class FeasibilityError(DelPezzoError):
    """A computation exceeds the configured desk-scale bound."""
