"""Flat key = value run configuration with a fully defaulted schema.

Unknown keys are errors; every knob below has a documented default, so an
empty file (or no file) is a valid configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .solver import PlateConfig, constant_source, gaussian_source
from .spectrum import RobinParams

_SOURCES = ("none", "constant", "gaussian")


@dataclass
class RunConfig:
    # physics
    a: float = 1.0          # convection coefficient (1/length)
    h: float = 0.1          # plate thickness
    L1: float = 1.0         # plate side length, x1
    L2: float = 1.0         # plate side length, x2
    T0: float = 0.0         # ambient temperature at the top face
    T1: float = 0.0         # ambient temperature at the bottom face
    # surface source
    source: str = "gaussian"   # none | constant | gaussian
    F0: float = 1.0            # constant-source amplitude
    amplitude: float = 1.0     # gaussian amplitude
    center1: float = 0.5       # gaussian center, x1
    center2: float = 0.5       # gaussian center, x2
    sigma: float = 0.12        # gaussian width
    t_end: float = 1.0         # final time
    time_samples: int = 11     # source time-grid samples on [0, t_end]
    # numerics
    M: int = 30                # transverse modes
    K: int = 120               # planar modes
    eig_tol: float = 1e-12     # eigenvalue residual tolerance (relative)
    quad_order: int = 32       # Gauss-Legendre order per axis
    # output grids
    grid_nx: int = 5           # planar evaluation points, x1
    grid_ny: int = 5           # planar evaluation points, x2
    eval_times: int = 6        # output times in (0, t_end]
    # sweep
    sweep_h: str = "0.1,0.03,0.01"  # comma-separated thickness grid

    def validate(self) -> None:
        if self.a <= 0.0 or self.h <= 0.0:
            raise ConfigError("a and h must be positive")
        if self.L1 <= 0.0 or self.L2 <= 0.0:
            raise ConfigError("L1 and L2 must be positive")
        if self.source not in _SOURCES:
            raise ConfigError(f"source must be one of {_SOURCES}")
        if self.M < 1 or self.K < 1:
            raise ConfigError("M and K must be >= 1")
        if self.eig_tol <= 0.0:
            raise ConfigError("eig_tol must be positive")
        if self.quad_order < 2:
            raise ConfigError("quad_order must be >= 2")
        if self.t_end <= 0.0:
            raise ConfigError("t_end must be positive")
        if self.time_samples < 2:
            raise ConfigError("time_samples must be >= 2")
        if self.grid_nx < 1 or self.grid_ny < 1 or self.eval_times < 1:
            raise ConfigError("output grid sizes must be >= 1")
        if self.sigma <= 0.0:
            raise ConfigError("sigma must be positive")
        try:
            hs = self.sweep_h_values()
        except ValueError as exc:
            raise ConfigError(f"bad sweep_h: {exc}") from None
        if not hs or any(x <= 0.0 for x in hs):
            raise ConfigError("sweep_h must be a nonempty list of positive values")

    def sweep_h_values(self) -> list[float]:
        return [float(tok) for tok in self.sweep_h.split(",") if tok.strip()]

    def plate_config(self, h: float | None = None) -> PlateConfig:
        h = self.h if h is None else h
        robin = RobinParams(a=self.a, h=h)
        if self.source == "none":
            src = None
        elif self.source == "constant":
            src = constant_source(self.F0, self.t_end, self.time_samples)
        else:
            src = gaussian_source(
                self.amplitude, (self.center1, self.center2), self.sigma,
                self.t_end, self.time_samples,
            )
        return PlateConfig(L1=self.L1, L2=self.L2, robin=robin, T0=self.T0, T1=self.T1, source=src)


def load_config(path: str | Path | None) -> RunConfig:
    """Parse a key = value file; missing path means all defaults."""
    rc = RunConfig()
    if path is not None:
        known = {f.name: f.type for f in fields(RunConfig)}
        text = Path(path).read_text()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (tok.strip() for tok in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
            current = getattr(rc, key)
            try:
                if isinstance(current, bool):
                    parsed = value.lower() in ("1", "true", "yes")
                elif isinstance(current, int):
                    parsed = int(value)
                elif isinstance(current, float):
                    parsed = float(value)
                else:
                    parsed = value
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {value!r}") from None
            setattr(rc, key, parsed)
    rc.validate()
    return rc
