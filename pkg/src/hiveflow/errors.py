"""Exception types shared across the package."""


class InvalidInstanceError(ValueError):
    """The partition triple cannot define a valid instance."""


class GridMismatchError(ValueError):
    """Two objects built over different triangular grids were combined."""


class FlowConsistencyError(ValueError):
    """A throughput vector violates the per-triangle closedness law."""


class CapExceededError(RuntimeError):
    """Enumeration aborted because the point cap was reached."""

    def __init__(self, limit: int):
        super().__init__(f"enumeration cap of {limit} points exceeded")
        self.limit = limit
