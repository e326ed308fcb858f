"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the regime where an operation is defined or certified."""


class ConvergenceError(RuntimeError):
    """A root solve could not meet its residual contract."""


class TruncationError(RuntimeError):
    """A truncated series cannot reach the requested certified tolerance."""


class GridMismatchError(ValueError):
    """Two finite-difference grids are not in the expected refinement relation."""


class ConfigError(ValueError):
    """A run configuration file is malformed or violates its schema."""


class QuadratureWarning(UserWarning):
    """A projection changed noticeably under quadrature refinement."""
