"""Exception types shared across the package."""


class ConditioningError(ArithmeticError):
    """A linear solve was rejected as too ill-conditioned, or a residual
    check failed after the solve.  Raised loudly instead of returning
    silently inaccurate results."""


class DecodingError(RuntimeError):
    """No consistent decode could be found (e.g. too many corrupted
    worker outputs for the error-correction radius)."""
