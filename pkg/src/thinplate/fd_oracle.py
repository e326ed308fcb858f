"""Crank-Nicolson reference solver for the thickness direction.

Validates the spectral machinery: u_t = u_zz on [0, h] with flux conditions

    u_z(h, t) =  f1(t) + a (T0 - u(h, t))
    u_z(0, t) = -f0(t) - a (T1 - u(0, t)),

discretized with second-order ghost-node boundaries.  The scheme reproduces
the static linear profile exactly and is unconditionally stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix, diags, identity
from scipy.sparse.linalg import splu

from .errors import GridMismatchError
from .spectrum import RobinParams


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of n nodes over [0, h] (spacing h/(n-1)) and a time step."""

    n: int
    h: float
    dt_step: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 grid nodes")
        if self.dt_step <= 0.0:
            raise ValueError("dt_step must be positive")

    @property
    def dz(self) -> float:
        return self.h / (self.n - 1)

    @property
    def z(self) -> np.ndarray:
        return np.linspace(0.0, self.h, self.n)

    def refine(self) -> "Grid1D":
        """2x refinement in space and time, sharing every coarse node.

        Both discretization errors are second order, so refining both
        directions together keeps the combined error in the single O(4^-1)
        family that Richardson extrapolation removes.
        """
        return Grid1D(n=2 * self.n - 1, h=self.h, dt_step=0.5 * self.dt_step)


@dataclass(frozen=True)
class Profile:
    """Grid function: node coordinates and values."""

    z: np.ndarray
    u: np.ndarray


def _as_callable(f):
    if callable(f):
        return f
    value = float(f)
    return lambda t: value


def cn_transverse_solve(
    p: RobinParams,
    g: np.ndarray,
    f0,
    f1,
    T0: float,
    T1: float,
    grid: Grid1D,
    t_end: float,
) -> Profile:
    """Crank-Nicolson march to t_end; f0/f1 are callables of t or constants.

    t_end must be an integer multiple of grid.dt_step.
    """
    if grid.h != p.h:
        raise ValueError("grid thickness disagrees with the Robin parameters")
    n_steps = int(round(t_end / grid.dt_step))
    if abs(n_steps * grid.dt_step - t_end) > 1e-12 * max(t_end, 1.0):
        raise ValueError("t_end must be a multiple of dt_step")
    f0 = _as_callable(f0)
    f1 = _as_callable(f1)
    a = p.a
    n = grid.n
    dz = grid.dz

    main = np.full(n, -2.0)
    main[0] = main[-1] = -2.0 - 2.0 * a * dz
    off = np.ones(n - 1)
    upper = off.copy()
    lower = off.copy()
    upper[0] = 2.0   # row 0 couples to node 1 with weight 2 (ghost elimination)
    lower[-1] = 2.0  # row n-1 couples to node n-2 with weight 2
    A = diags([lower, main, upper], offsets=[-1, 0, 1], format="csc") / dz**2

    def rhs_bc(t: float) -> np.ndarray:
        b = np.zeros(n)
        b[0] = 2.0 * (f0(t) + a * T1) / dz
        b[-1] = 2.0 * (f1(t) + a * T0) / dz
        return b

    k = grid.dt_step
    eye = identity(n, format="csc")
    lhs = splu(csc_matrix(eye - 0.5 * k * A))
    rhs_mat = eye + 0.5 * k * A

    u = np.asarray(g, float).copy()
    if len(u) != n:
        raise ValueError("initial profile size disagrees with the grid")
    t = 0.0
    for _ in range(n_steps):
        b = rhs_mat @ u + 0.5 * k * (rhs_bc(t) + rhs_bc(t + k))
        u = lhs.solve(b)
        t += k
    return Profile(z=grid.z, u=u)


def richardson_extrapolate(coarse: Profile, fine: Profile) -> tuple[Profile, float]:
    """Second-order Richardson combination on the shared (coarse) nodes.

    Returns the extrapolated profile and an a posteriori error estimate
    max|fine - coarse| / 3, the usual bound for the fine solution's error.
    """
    if len(fine.u) != 2 * len(coarse.u) - 1:
        raise GridMismatchError("fine grid is not a 2x refinement of the coarse grid")
    shared = fine.u[::2]
    if not np.allclose(fine.z[::2], coarse.z, rtol=0.0, atol=1e-12):
        raise GridMismatchError("fine grid nodes do not contain the coarse nodes")
    extrap = (4.0 * shared - coarse.u) / 3.0
    err = float(np.max(np.abs(shared - coarse.u))) / 3.0
    return Profile(z=coarse.z, u=extrap), err
