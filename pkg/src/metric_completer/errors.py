"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter triple is unacceptable, or a magic value is not magic."""


class RangeError(ValueError):
    """A distance, label or index is outside its permitted range."""


class FormatError(ValueError):
    """Malformed graph or catalogue input."""


class CapacityError(RuntimeError):
    """A brute-force search would exceed its configured bound."""


class PreconditionError(RuntimeError):
    """An operation was invoked on input that violates its contract."""
