"""Thickness-direction Green's function of the Robin slab.

The kernel is a sum of decaying modes

    P_m(z, w, dt) = 2 * exp(-alpha_m^2 dt) * V_m(z) * V_m(w) / D_m,
    V_m(z) = alpha_m * cos(alpha_m z) + a * sin(alpha_m z),
    D_m    = 2a + h * (a^2 + alpha_m^2),

together with the certified sup bound (4/h)*exp(-alpha_m^2 dt) per mode and
the thin-slab deviation bound between P_1 and its leading surrogate
(alpha_1^2 / 2a) * exp(-alpha_1^2 dt).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, TruncationError
from .spectrum import RobinSpectrum

# Coordinates this far outside [0, h] are treated as face rounding and clamped.
COORD_SLACK = 1e-12


@dataclass(frozen=True)
class TransverseKernel:
    """Immutable view of a spectrum truncated to M modes."""

    spectrum: RobinSpectrum
    M: int = 0  # 0 means "all modes in the spectrum"

    def __post_init__(self):
        m = self.M if self.M else self.spectrum.M
        if not (1 <= m <= self.spectrum.M):
            raise ValueError(f"M={self.M} not available in spectrum of size {self.spectrum.M}")
        object.__setattr__(self, "M", m)

    @property
    def a(self) -> float:
        return self.spectrum.params.a

    @property
    def h(self) -> float:
        return self.spectrum.params.h


def mode_shape(alpha, a: float, z: float):
    """V(z) = alpha*cos(alpha z) + a*sin(alpha z); vectorized in alpha."""
    return alpha * np.cos(alpha * z) + a * np.sin(alpha * z)


def _clamp_coord(z: float, h: float) -> float:
    if -COORD_SLACK < z < 0.0:
        return 0.0
    if h < z < h + COORD_SLACK:
        return h
    if not (0.0 <= z <= h):
        raise DomainError(f"coordinate {z} outside slab [0, {h}]")
    return z


def pm_term(k: TransverseKernel, m: int, z: float, w: float, dt: float) -> float:
    """Single mode P_m(z, w, dt)."""
    if not (1 <= m <= k.M):
        raise ValueError(f"mode {m} outside truncation M={k.M}")
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    a, h = k.a, k.h
    z = _clamp_coord(z, h)
    w = _clamp_coord(w, h)
    alpha = k.spectrum.alpha(m)
    denom = 2.0 * a + h * (a * a + alpha * alpha)
    return (
        2.0
        * math.exp(-alpha * alpha * dt)
        * mode_shape(alpha, a, z)
        * mode_shape(alpha, a, w)
        / denom
    )


def pm_sup_bound(k: TransverseKernel, m: int, dt: float) -> float:
    """(4/h) * exp(-alpha_m^2 dt), a certified sup over z, w of P_m."""
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    alpha = k.spectrum.alpha(m)
    return (4.0 / k.h) * math.exp(-alpha * alpha * dt)


def tail_sup_bound(k: TransverseKernel, m_used: int, dt: float) -> float:
    """Certified bound on sum_{m > m_used} sup P_m for dt > 0.

    Uses alpha_m >= (m-1)*pi/h, so the tail is dominated by a series whose
    consecutive ratios are at most exp(-(2*m_used+1)*(pi/h)^2*dt) < 1.
    """
    if dt <= 0.0:
        raise ValueError("tail bound requires dt > 0")
    h = k.h
    q_low = m_used * math.pi / h
    first = (4.0 / h) * math.exp(-q_low * q_low * dt)
    ratio = math.exp(-(2 * m_used + 1) * (math.pi / h) ** 2 * dt)
    return first / (1.0 - ratio)


def gh_eval(
    k: TransverseKernel, z: float, w: float, dt: float, tail_tol: float = 1e-12
) -> tuple[float, float]:
    """Kernel value with a certified truncation bound.

    Sums modes until the certified tail drops below tail_tol.  The series
    is a delta at dt = 0 and must not be evaluated there.
    """
    if dt <= 0.0:
        raise DomainError("gh_eval requires dt > 0")
    total = 0.0
    for m in range(1, k.M + 1):
        total += pm_term(k, m, z, w, dt)
        tb = tail_sup_bound(k, m, dt)
        if tb <= tail_tol:
            return total, tb
    raise TruncationError(
        f"tail {tail_sup_bound(k, k.M, dt):.3e} > {tail_tol:.1e} with M={k.M}; enlarge the spectrum"
    )


def p1_leading(k: TransverseKernel, dt: float) -> float:
    """Leading-order surrogate (alpha_1^2 / 2a) * exp(-alpha_1^2 dt)."""
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    a1 = k.spectrum.alpha(1)
    return a1 * a1 / (2.0 * k.a) * math.exp(-a1 * a1 * dt)


def p1_deviation_bound(k: TransverseKernel, dt: float) -> float:
    """(5/2) * h * alpha_1^2 * exp(-alpha_1^2 dt), dominating |P_1 - leading|.

    Certified for all z, w in [0, h] when a*h <= 1/3.
    """
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    if not k.spectrum.params.asymptotic_valid:
        raise DomainError(f"deviation bound requires a*h <= 1/3; got {k.a * k.h}")
    a1 = k.spectrum.alpha(1)
    return 2.5 * k.h * a1 * a1 * math.exp(-a1 * a1 * dt)
