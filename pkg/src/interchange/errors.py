"""Exception types shared across the package."""


class InterchangeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(InterchangeError, ValueError):
    """Invalid user-supplied parameter (graph family, CLI flag, index range)."""


class DegenerateWeightError(InterchangeError, ValueError):
    """Weight function has no usable mass (all-zero weights, isolated vertex)."""


class DisconnectedError(InterchangeError, ValueError):
    """Operation requires a connected weight function but got a disconnected one."""


class CapError(InterchangeError, ValueError):
    """Requested size exceeds a hard cap of the exact computation routes."""


class ConsistencyError(InterchangeError, RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""
