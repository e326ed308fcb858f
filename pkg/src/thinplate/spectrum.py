"""Eigenvalues of the Robin slab.

The transverse modes of a slab of thickness ``h`` with convective (Robin)
faces have rates ``alpha_m`` solving

    tan(h*q) = 2*a*q / (q**2 - a**2),    q > 0.

Everything here works with the pole-free residual

    R(q) = sin(h*q) * (q**2 - a**2) - 2*a*q * cos(h*q),

which is smooth, vanishes exactly at the solutions, and changes sign exactly
once inside each certified bracket, so plain bisection is unconditionally
safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

# Relative inward shrink applied to bracket endpoints so the residual has
# strict opposite signs there.
BRACKET_SHRINK = 1e-9
# Bisection runs until the bracket is this narrow (relative), then a few
# clamped Newton steps polish the root to machine precision.
BISECT_RELWIDTH = 1e-12
NEWTON_STEPS = 3


@dataclass(frozen=True)
class RobinParams:
    """Convection coefficient ``a`` (1/length) and slab thickness ``h``."""

    a: float
    h: float

    def __post_init__(self):
        if not (self.a > 0.0):
            raise ValueError("convection coefficient a must be positive")
        if not (self.h > 0.0):
            raise ValueError("thickness h must be positive")

    @property
    def bracket_valid(self) -> bool:
        """True iff h < pi/(2a), the hypothesis of the bracket construction."""
        return self.h < math.pi / (2.0 * self.a)

    @property
    def asymptotic_valid(self) -> bool:
        """True iff a*h <= 1/3, the regime of the thin-plate estimates."""
        return self.a * self.h <= 1.0 / 3.0


def eigen_residual(q, p: RobinParams):
    """Pole-free residual R(q); accepts scalars or numpy arrays."""
    a, h = p.a, p.h
    q = np.asarray(q, dtype=float)
    r = np.sin(h * q) * (q * q - a * a) - 2.0 * a * q * np.cos(h * q)
    return float(r) if r.ndim == 0 else r


def eigen_residual_prime(q, p: RobinParams):
    """dR/dq, used only by the Newton polish."""
    a, h = p.a, p.h
    q = np.asarray(q, dtype=float)
    s = np.sin(h * q)
    c = np.cos(h * q)
    d = h * c * (q * q - a * a) + 2.0 * q * s - 2.0 * a * c + 2.0 * a * h * q * s
    return float(d) if d.ndim == 0 else d


def bracket(m: int, p: RobinParams) -> tuple[float, float]:
    """Open interval certified to contain alpha_m, endpoints shrunk inward.

    Requires h < pi/(2a).  For m = 1 the interval is (0, pi/(2h)); for
    m >= 2 it is ((m-1)*pi/h, (m-1)*pi/h + pi/(2h)).
    """
    if m < 1:
        raise ValueError("mode index m must be >= 1")
    if not p.bracket_valid:
        raise DomainError(
            f"bracket construction requires h < pi/(2a); got h={p.h}, pi/(2a)={math.pi / (2 * p.a)}"
        )
    h = p.h
    if m == 1:
        lo, hi = 0.0, math.pi / (2.0 * h)
    else:
        lo = (m - 1) * math.pi / h
        hi = lo + math.pi / (2.0 * h)
    width = hi - lo
    return lo + BRACKET_SHRINK * width, hi - BRACKET_SHRINK * width


def _bisect_newton(lo: np.ndarray, hi: np.ndarray, p: RobinParams) -> np.ndarray:
    """Vectorized bisection + clamped Newton inside sign-changing brackets."""
    flo = eigen_residual(lo, p)
    fhi = eigen_residual(hi, p)
    if np.any(flo * fhi >= 0.0):
        bad = int(np.argmax(flo * fhi >= 0.0))
        raise ConvergenceError(
            f"residual does not change sign on bracket [{lo[bad]}, {hi[bad]}]"
        )
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = eigen_residual(mid, p)
        left = flo * fm <= 0.0  # root (or exact hit) in [lo, mid]
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
        if np.all(hi - lo <= BISECT_RELWIDTH * mid):
            break
    root = 0.5 * (lo + hi)
    for _ in range(NEWTON_STEPS):
        d = eigen_residual_prime(root, p)
        safe = np.where(d == 0.0, 1.0, d)
        step = np.where(d == 0.0, 0.0, eigen_residual(root, p) / safe)
        root = np.clip(root - step, lo, hi)
    return root


def solve_alpha(m: int, p: RobinParams, tol: float = 1e-12) -> float:
    """The m-th eigenvalue, certified to |R(alpha)| <= tol*(alpha**2 + a**2)."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    lo, hi = bracket(m, p)
    root = float(_bisect_newton(np.array([lo]), np.array([hi]), p)[0])
    scale = root * root + p.a * p.a
    if abs(eigen_residual(root, p)) > tol * scale:
        raise ConvergenceError(
            f"residual {eigen_residual(root, p):.3e} exceeds {tol:.1e} * {scale:.3e} for m={m}"
        )
    return root


def alpha1_bounds(p: RobinParams) -> tuple[float, float]:
    """Certified sandwich for alpha_1, valid when a*h <= 1/3.

    lo = sqrt(a^2 + 2a/(h + 2ah^2)),  hi = sqrt(a^2 + 2a/h) <= sqrt(3a/h).
    """
    a, h = p.a, p.h
    if not p.asymptotic_valid:
        raise DomainError(f"alpha1 bounds require a*h <= 1/3; got a*h = {a * h}")
    lo = math.sqrt(a * a + 2.0 * a / (h + 2.0 * a * h * h))
    hi = math.sqrt(a * a + 2.0 * a / h)
    assert hi <= math.sqrt(3.0 * a / h) * (1.0 + 1e-14)
    return lo, hi


@dataclass(frozen=True)
class RobinSpectrum:
    """The first M eigenvalues with their certified brackets."""

    params: RobinParams
    alphas: np.ndarray
    brackets: tuple[tuple[float, float], ...]
    residual_tol: float

    def __post_init__(self):
        self.alphas.setflags(write=False)
        if np.any(np.diff(self.alphas) <= 0.0):
            raise ConvergenceError("eigenvalues are not strictly increasing")
        for alpha, (lo, hi) in zip(self.alphas, self.brackets):
            if not (lo <= alpha <= hi):
                raise ConvergenceError(f"{alpha} escaped its bracket [{lo}, {hi}]")

    @property
    def M(self) -> int:
        return len(self.alphas)

    def alpha(self, m: int) -> float:
        """alpha_m, 1-based."""
        return float(self.alphas[m - 1])


def build_spectrum(p: RobinParams, M: int, tol: float = 1e-12) -> RobinSpectrum:
    """Solve for alpha_1..alpha_M (vectorized over modes)."""
    if M < 1:
        raise ValueError("M must be >= 1")
    pairs = [bracket(m, p) for m in range(1, M + 1)]
    lo = np.array([b[0] for b in pairs])
    hi = np.array([b[1] for b in pairs])
    roots = _bisect_newton(lo, hi, p)
    scale = roots * roots + p.a * p.a
    worst = np.max(np.abs(eigen_residual(roots, p)) / scale)
    if worst > tol:
        raise ConvergenceError(f"worst relative residual {worst:.3e} exceeds tol {tol:.1e}")
    return RobinSpectrum(params=p, alphas=roots, brackets=tuple(pairs), residual_tol=tol)


def scan_eigenvalues(p: RobinParams, q_max: float, step: float) -> list[tuple[float, float]]:
    """All sign-change intervals of the residual on (0, q_max], by dense scan.

    Test-time oracle for build_spectrum.  A step wider than the spacing
    between roots may miss sign changes; callers choose step accordingly.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    qs = np.arange(step, q_max + 0.5 * step, step)
    qs = qs[qs <= q_max]
    if len(qs) < 2:
        return []
    r = eigen_residual(qs, p)
    s = np.sign(r)
    flips = np.nonzero(s[:-1] * s[1:] < 0.0)[0]
    return [(float(qs[i]), float(qs[i + 1])) for i in flips]
