"""Spectral solver and verification harness for a convectively heated thin plate."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    GridMismatchError,
    QuadratureWarning,
    TruncationError,
)
from .solver import (
    PlateConfig,
    PlateSolver,
    SolutionSample,
    SurfaceSource,
    constant_source,
    error_certificate,
    gaussian_source,
    static_state,
    tail_contribution_bound,
)
from .spectrum import RobinParams, RobinSpectrum, build_spectrum

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "GridMismatchError",
    "QuadratureWarning",
    "TruncationError",
    "PlateConfig",
    "PlateSolver",
    "SolutionSample",
    "SurfaceSource",
    "constant_source",
    "error_certificate",
    "gaussian_source",
    "static_state",
    "tail_contribution_bound",
    "RobinParams",
    "RobinSpectrum",
    "build_spectrum",
]
