"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the region where a series or trace converges."""


class TruncationError(ValueError):
    """Two truncated series cannot be combined without losing known terms."""


class InputError(ValueError):
    """Malformed input (bad matrix, missing weight, ...)."""
