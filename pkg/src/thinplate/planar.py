"""Neumann heat semigroup on a rectangle, realized in the cosine eigenbasis.

Modes are phi_{k1,k2}(x) = n(k1, L1) n(k2, L2) cos(k1 pi x1/L1) cos(k2 pi x2/L2)
with eigenvalue lambda = pi^2 (k1^2/L1^2 + k2^2/L2^2) and L2-normalization
n(k, L) = sqrt((2 - [k==0]) / L).  The constant mode (0, 0) carries all the
mass: applying the semigroup to f == 1 returns exactly 1 for every dt.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureWarning, TruncationError

DEFAULT_QUAD_ORDER = 32
W_EVAL_TAIL_TOL = 1e-8


@dataclass(frozen=True)
class PlanarModeSet:
    """The K lowest Neumann cosine modes of the rectangle [0,L1]x[0,L2]."""

    L1: float
    L2: float
    k1: np.ndarray
    k2: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        for arr in (self.k1, self.k2, self.lam):
            arr.setflags(write=False)

    @property
    def K(self) -> int:
        return len(self.lam)

    def _norms(self) -> tuple[np.ndarray, np.ndarray]:
        n1 = np.sqrt(np.where(self.k1 == 0, 1.0, 2.0) / self.L1)
        n2 = np.sqrt(np.where(self.k2 == 0, 1.0, 2.0) / self.L2)
        return n1, n2

    def eval_point(self, x1: float, x2: float) -> np.ndarray:
        """phi_k(x) for all modes, shape (K,)."""
        n1, n2 = self._norms()
        return (
            n1 * np.cos(self.k1 * math.pi * x1 / self.L1)
            * n2 * np.cos(self.k2 * math.pi * x2 / self.L2)
        )

    def eval_axes(self, x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-axis factors on tensor grids: shapes (K, n1) and (K, n2)."""
        n1, n2 = self._norms()
        c1 = n1[:, None] * np.cos(np.outer(self.k1, math.pi * np.asarray(x1) / self.L1))
        c2 = n2[:, None] * np.cos(np.outer(self.k2, math.pi * np.asarray(x2) / self.L2))
        return c1, c2


def planar_modes(L1: float, L2: float, K: int) -> PlanarModeSet:
    """K smallest modes; ties broken by (k1, k2) lexicographic order."""
    if L1 <= 0.0 or L2 <= 0.0:
        raise ValueError("side lengths must be positive")
    if K < 1:
        raise ValueError("K must be >= 1")
    ks = np.arange(K + 1)
    K1, K2 = np.meshgrid(ks, ks, indexing="ij")
    k1 = K1.ravel()
    k2 = K2.ravel()
    lam = math.pi**2 * (k1**2 / L1**2 + k2**2 / L2**2)
    order = np.lexsort((k2, k1, lam))[:K]
    return PlanarModeSet(
        L1=L1, L2=L2,
        k1=k1[order].astype(float),
        k2=k2[order].astype(float),
        lam=lam[order],
    )


# ---------------------------------------------------------------------------
# Face fields


@dataclass(frozen=True)
class UniformField:
    """Spatially constant face value."""

    value: float

    def __call__(self, x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        return np.full(x1.shape, self.value)

    def sup_on(self, L1: float, L2: float) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class GaussianSpot:
    """Gaussian heating spot of given amplitude, center and width."""

    amplitude: float
    center: tuple[float, float]
    sigma: float

    def __call__(self, x1, x2):
        c1, c2 = self.center
        x1 = np.asarray(x1, float)
        x2 = np.asarray(x2, float)
        r2 = (x1 - c1) ** 2 + (x2 - c2) ** 2
        return self.amplitude * np.exp(-r2 / (2.0 * self.sigma**2))

    def sup_on(self, L1: float, L2: float) -> float:
        c1, c2 = self.center
        d1 = max(0.0, -c1, c1 - L1)
        d2 = max(0.0, -c2, c2 - L2)
        return abs(self.amplitude) * math.exp(-(d1 * d1 + d2 * d2) / (2.0 * self.sigma**2))


class GridField:
    """Bilinear interpolant of samples on a uniform grid covering the rectangle."""

    def __init__(self, values: np.ndarray, L1: float, L2: float):
        values = np.asarray(values, float)
        if values.ndim != 2 or min(values.shape) < 2:
            raise ValueError("values must be a 2D array with at least 2 samples per axis")
        from scipy.interpolate import RegularGridInterpolator

        self.values = values
        self.L1 = L1
        self.L2 = L2
        g1 = np.linspace(0.0, L1, values.shape[0])
        g2 = np.linspace(0.0, L2, values.shape[1])
        self._interp = RegularGridInterpolator((g1, g2), values, method="linear")

    def __call__(self, x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        pts = np.stack([x1.ravel(), x2.ravel()], axis=-1)
        return self._interp(pts).reshape(x1.shape)

    def sup_on(self, L1: float, L2: float) -> float:
        return float(np.max(np.abs(self.values)))


# ---------------------------------------------------------------------------
# Projection and semigroup


def _gauss_grid(L: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(order)
    return 0.5 * L * (x + 1.0), 0.5 * L * w


def _project(f, ms: PlanarModeSet, order: int) -> np.ndarray:
    x1, w1 = _gauss_grid(ms.L1, order)
    x2, w2 = _gauss_grid(ms.L2, order)
    F = np.asarray(f(x1[:, None], x2[None, :]), float)
    c1, c2 = ms.eval_axes(x1, x2)
    return np.einsum("i,j,ij,ki,kj->k", w1, w2, F, c1, c2, optimize=True)


def project_source(f, ms: PlanarModeSet, quad_order: int = DEFAULT_QUAD_ORDER) -> np.ndarray:
    """Modal coefficients c_k = integral of f * phi_k by tensor Gauss-Legendre.

    Warns (QuadratureWarning) if a 1.5x refinement moves any coefficient by
    more than 1e-8 relative.
    """
    if quad_order < 2:
        raise ValueError("quad_order must be >= 2")
    c = _project(f, ms, quad_order)
    c_ref = _project(f, ms, max(quad_order + 1, int(math.ceil(1.5 * quad_order))))
    scale = max(float(np.max(np.abs(c_ref))), 1e-300)
    shift = float(np.max(np.abs(c - c_ref))) / scale
    if shift > 1e-8:
        warnings.warn(
            f"projection moved by {shift:.2e} relative under quadrature refinement",
            QuadratureWarning,
            stacklevel=2,
        )
    return c


def face_l2_sq(f, L1: float, L2: float, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """Integral of f^2 over the rectangle, by the same tensor quadrature."""
    x1, w1 = _gauss_grid(L1, quad_order)
    x2, w2 = _gauss_grid(L2, quad_order)
    F = np.asarray(f(x1[:, None], x2[None, :]), float)
    return float(np.einsum("i,j,ij->", w1, w2, F * F))


def semigroup_apply(c: np.ndarray, ms: PlanarModeSet, dt: float, x: tuple[float, float]) -> float:
    """sum_k exp(-lambda_k dt) c_k phi_k(x)."""
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    phi = ms.eval_point(x[0], x[1])
    return float(np.sum(np.exp(-ms.lam * dt) * c * phi))


def w_eval_tail_bound(ms: PlanarModeSet, dt: float) -> float:
    """Certified bound on the omitted modes of the truncated planar kernel.

    Every excluded mode has lambda >= max included lambda; the lattice sum of
    exp(-lambda dt/2) is bounded by the product of one-dimensional theta-type
    bounds 1 + L/(2*sqrt(pi*dt/2)).
    """
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    lam0 = float(ms.lam[-1])
    tau = 0.5 * dt
    th1 = 1.0 + ms.L1 / (2.0 * math.sqrt(math.pi * tau))
    th2 = 1.0 + ms.L2 / (2.0 * math.sqrt(math.pi * tau))
    return 4.0 / (ms.L1 * ms.L2) * math.exp(-lam0 * tau) * th1 * th2


def w_eval(
    ms: PlanarModeSet,
    x: tuple[float, float],
    y: tuple[float, float],
    dt: float,
    tail_tol: float = W_EVAL_TAIL_TOL,
) -> float:
    """Truncated planar kernel value; diagnostic use only.

    Refuses (TruncationError) when dt is too small for the truncation to be
    certified below tail_tol.
    """
    if dt <= 0.0:
        raise ValueError("w_eval requires dt > 0")
    tb = w_eval_tail_bound(ms, dt)
    if tb > tail_tol:
        raise TruncationError(
            f"certified tail {tb:.3e} > {tail_tol:.1e} at dt={dt}; increase K or dt"
        )
    phix = ms.eval_point(x[0], x[1])
    phiy = ms.eval_point(y[0], y[1])
    return float(np.sum(np.exp(-ms.lam * dt) * phix * phiy))
