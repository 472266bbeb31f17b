"""Exception types shared across the package."""


class CutoffViolationError(ValueError):
    """An occupation number exceeds (or would exceed) a mode's cutoff."""


class TruncationError(RuntimeError):
    """A truncation tolerance could not be met.

    Carries the achieved tail mass in ``tail``.
    """

    def __init__(self, message: str, tail: float):
        super().__init__(message)
        self.tail = tail


class ModeMismatchError(ValueError):
    """Two states do not share the same mode structure."""


class ConditioningError(RuntimeError):
    """Conditioning on a zero-probability event; no renormalizable state exists."""


class ConfigurationError(ValueError):
    """An interferometer or experiment configuration is invalid for the request."""


class EnumerationLimitError(RuntimeError):
    """An exact enumeration would exceed the configured size cap."""
