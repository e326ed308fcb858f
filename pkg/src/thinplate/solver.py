"""Full and reduced solutions for the heated thin plate.

The plate occupies [0,L1] x [0,L2] x [0,h].  Its faces exchange heat with
ambient temperatures T1 (bottom) and T0 (top) through a convection
coefficient a, and receive a prescribed surface source F on both faces.
Starting from the static (equilibrium) profile, the temperature is

    U = G(x3) + sum_m sum_k  [transverse mode m trace] x [planar mode k]
                              x [exact exponential time convolution of F],

while the reduced (thin-plate) model keeps only the leading transverse
rate alpha_1:

    U_red = G(x3) + (alpha_1^2 / 2a) * int_0^t e^{-alpha_1^2 (t-s)}
            * [planar semigroup applied to the two face sources] ds.

Every solution value is accompanied by a certified truncation bound, and
the model error |U - U_red| carries the certificate (19 h / 3) * sup|F|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import polygamma

from .errors import DomainError
from .etd import exp_conv_linear
from .planar import PlanarModeSet, face_l2_sq, planar_modes, project_source
from .spectrum import RobinParams, RobinSpectrum, build_spectrum
from .transverse import mode_shape

ERROR_CONSTANT = 19.0 / 3.0  # model-error certificate is (19 h / 3) * sup|F|


# ---------------------------------------------------------------------------
# Configuration types


@dataclass(frozen=True)
class SurfaceSource:
    """Face sources sampled in time, piecewise linear between samples.

    Both faces share the time grid; each sample is a face field (callable
    (x1, x2) -> value with a ``sup_on(L1, L2)`` method).
    """

    times: np.ndarray
    top: tuple
    bottom: tuple

    def __post_init__(self):
        t = np.asarray(self.times, float)
        if t.ndim != 1 or len(t) < 2 or t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be increasing and start at 0")
        if len(self.top) != len(t) or len(self.bottom) != len(t):
            raise ValueError("each face needs one field per time sample")
        object.__setattr__(self, "times", t)
        t.setflags(write=False)

    def sup_norm(self, L1: float, L2: float, t: float) -> float:
        """sup |F| over both faces and [0, t], recomputed from the samples.

        Piecewise-linear interpolants attain extrema at sample instants, so
        the max over the samples bracketing [0, t] is exact.
        """
        j_hi = int(np.searchsorted(self.times, t, side="left"))
        j_hi = min(j_hi, len(self.times) - 1)
        sup = 0.0
        for j in range(j_hi + 1):
            sup = max(sup, self.top[j].sup_on(L1, L2), self.bottom[j].sup_on(L1, L2))
        return sup


@dataclass(frozen=True)
class PlateConfig:
    """Geometry, convection parameters, ambient temperatures and source."""

    L1: float
    L2: float
    robin: RobinParams
    T0: float = 0.0
    T1: float = 0.0
    source: SurfaceSource | None = None

    def __post_init__(self):
        if self.L1 <= 0.0 or self.L2 <= 0.0:
            raise ValueError("side lengths must be positive")

    @property
    def a(self) -> float:
        return self.robin.a

    @property
    def h(self) -> float:
        return self.robin.h


@dataclass(frozen=True)
class LinearProfile:
    """Static temperature profile G(x3) = c0 + c1 * x3."""

    c0: float
    c1: float

    def __call__(self, x3: float) -> float:
        return self.c0 + self.c1 * x3


@dataclass(frozen=True)
class SolutionSample:
    """One evaluation point with both model values and the error budget."""

    x1: float
    x2: float
    x3: float
    t: float
    value_full: float
    value_reduced: float
    truncation_slack: float
    certificate: float  # (19 h / 3) * sup|F| + truncation_slack


def static_state(a: float, h: float, T0: float, T1: float) -> LinearProfile:
    """The unique linear equilibrium profile balancing both face conditions.

    Solves c1 = a (c0 - T1) and c1 = a (T0 - c0 - c1 h).
    """
    if a <= 0.0 or h <= 0.0:
        raise ValueError("a and h must be positive")
    c0 = (T0 + T1 * (1.0 + a * h)) / (2.0 + a * h)
    c1 = a * (c0 - T1)
    return LinearProfile(c0=c0, c1=c1)


def tail_contribution_bound(spec: RobinSpectrum, M: int, sup_F: float) -> float:
    """Bound on the summed time-integrated contribution of modes m > M.

    Each mode contributes at most 8/(h alpha_m^2) * sup_F; beyond the
    computed spectrum the eigenvalues are replaced by the certified lower
    bound alpha_m >= (m-1) pi / h, giving a partial zeta tail.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if sup_F == 0.0:
        return 0.0
    h = spec.params.h
    total = 0.0
    for m in range(M + 1, spec.M + 1):
        total += 8.0 / (h * spec.alpha(m) ** 2)
    m_start = max(M + 1, spec.M + 1)
    # sum_{m >= m_start} 1/(m-1)^2 = psi'(m_start - 1)
    total += 8.0 * h / math.pi**2 * float(polygamma(1, m_start - 1))
    return total * sup_F


def error_certificate(cfg: PlateConfig, t: float) -> float:
    """(19 h / 3) * sup|F| over [0, t]; the reduced-model error budget."""
    if not cfg.robin.asymptotic_valid:
        raise DomainError(f"certificate requires a*h <= 1/3; got {cfg.a * cfg.h}")
    sup = cfg.source.sup_norm(cfg.L1, cfg.L2, t) if cfg.source is not None else 0.0
    return ERROR_CONSTANT * cfg.h * sup


def _inv_sq_lattice_tail(alpha2: float, lam0: float, L1: float, L2: float) -> float:
    """Upper bound on sum of (alpha2 + lambda)^-2 over lattice modes with
    lambda = pi^2 (k1^2/L1^2 + k2^2/L2^2) >= lam0.

    Nested sum-plus-integral comparison for the monotone summands; exact
    closed forms for the integral remainders.
    """

    def tail_int_sq(c: float, u0: float) -> float:
        # integral_{u0}^inf du / (c + u^2)^2
        rc = math.sqrt(c)
        return (
            math.pi / (4.0 * c * rc)
            - u0 / (2.0 * c * (c + u0 * u0))
            - math.atan(u0 / rc) / (2.0 * c * rc)
        )

    k1_star = int(math.ceil(L1 * math.sqrt(max(lam0, 0.0)) / math.pi))
    total = 0.0
    for k1 in range(k1_star + 1):
        mu1 = (math.pi * k1 / L1) ** 2
        c = alpha2 + mu1
        rem = lam0 - mu1
        k2min = 0 if rem <= 0.0 else int(math.ceil(L2 * math.sqrt(rem) / math.pi))
        u0 = math.pi * k2min / L2
        total += 1.0 / (c + u0 * u0) ** 2 + (L2 / math.pi) * tail_int_sq(c, u0)
    # k1 > k1_star: the lambda >= lam0 constraint is inactive, so the inner
    # sum over all k2 is bounded by 1/c^2 + L2/(4 c^{3/2}).
    u1 = math.pi * (k1_star + 1) / L1
    c1 = alpha2 + u1 * u1
    total += 1.0 / c1**2 + L2 / (4.0 * c1**1.5)
    total += (L1 / math.pi) * tail_int_sq(alpha2, u1)
    total += (
        (L1 / math.pi)
        * (L2 / 4.0)
        * (1.0 / alpha2)
        * (1.0 - u1 / math.sqrt(alpha2 + u1 * u1))
    )
    return total


class PlateSolver:
    """Assembles both models over an immutable configuration.

    Numerical knobs: M transverse modes, K planar modes, eigenvalue residual
    tolerance and quadrature order for the source projection.  All
    evaluations are deterministic; time convolutions are cached per t.
    """

    def __init__(
        self,
        cfg: PlateConfig,
        M: int = 20,
        K: int = 80,
        eig_tol: float = 1e-12,
        quad_order: int = 32,
    ):
        self.cfg = cfg
        self.spectrum = build_spectrum(cfg.robin, M, eig_tol)
        self.modes = planar_modes(cfg.L1, cfg.L2, K)
        self.profile = static_state(cfg.a, cfg.h, cfg.T0, cfg.T1)
        a, h = cfg.a, cfg.h
        alphas = self.spectrum.alphas
        self._denom = 2.0 * a + h * (a * a + alphas * alphas)
        self._v_bot = mode_shape(alphas, a, 0.0)
        self._v_top = mode_shape(alphas, a, h)

        src = cfg.source
        if src is not None:
            self._ctop = np.stack([project_source(f, self.modes, quad_order) for f in src.top])
            self._cbot = np.stack([project_source(f, self.modes, quad_order) for f in src.bottom])
            # Parseval residuals ||f||^2 - sum c_k^2 per face, summed over
            # distinct sample fields (repeats of one field object cannot
            # enlarge sum_k sup_s c_k(s)^2); feeds the planar-truncation bound.
            res = []
            for fields, coeffs in ((src.top, self._ctop), (src.bottom, self._cbot)):
                r = 0.0
                seen: set[int] = set()
                for f, c in zip(fields, coeffs):
                    if id(f) in seen:
                        continue
                    seen.add(id(f))
                    l2 = face_l2_sq(f, cfg.L1, cfg.L2, quad_order)
                    r += max(l2 - float(np.sum(c * c)), 0.0)
                res.append(r)
            self._res2_top, self._res2_bot = res
        else:
            self._ctop = self._cbot = None
            self._res2_top = self._res2_bot = 0.0
        self._full_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}
        self._reduced_cache: dict[float, np.ndarray] = {}

    # -- helpers ----------------------------------------------------------

    @property
    def M(self) -> int:
        return self.spectrum.M

    @property
    def K(self) -> int:
        return self.modes.K

    def sup_F(self, t: float) -> float:
        src = self.cfg.source
        return src.sup_norm(self.cfg.L1, self.cfg.L2, t) if src is not None else 0.0

    def _planar_tail_factor(self, alpha2: float) -> float:
        """Cauchy-Schwarz factor sqrt(sum_{k>K} phi_k^2 / (alpha2+lambda)^2).

        Every omitted mode has lambda >= max included lambda.
        """
        lam0 = float(self.modes.lam[-1])
        s = _inv_sq_lattice_tail(alpha2, lam0, self.cfg.L1, self.cfg.L2)
        return math.sqrt(4.0 / (self.cfg.L1 * self.cfg.L2) * s)

    def _full_convolutions(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Per-(m, k) time convolutions of the two face coefficient series."""
        key = float(t)
        if key not in self._full_cache:
            mu = self.spectrum.alphas[:, None] ** 2 + self.modes.lam[None, :]
            itop = exp_conv_linear(
                mu, self.cfg.source.times, self._ctop[:, None, :] * np.ones((1, self.M, 1)), t
            )
            ibot = exp_conv_linear(
                mu, self.cfg.source.times, self._cbot[:, None, :] * np.ones((1, self.M, 1)), t
            )
            self._full_cache[key] = (itop, ibot)
        return self._full_cache[key]

    def _reduced_convolution(self, t: float) -> np.ndarray:
        key = float(t)
        if key not in self._reduced_cache:
            mu = self.spectrum.alphas[0] ** 2 + self.modes.lam
            self._reduced_cache[key] = exp_conv_linear(
                mu, self.cfg.source.times, self._ctop + self._cbot, t
            )
        return self._reduced_cache[key]

    # -- models -----------------------------------------------------------

    def _check_point(self, x1: float, x2: float, x3: float, t: float) -> None:
        if not (0.0 <= x1 <= self.cfg.L1 and 0.0 <= x2 <= self.cfg.L2):
            raise DomainError(f"({x1}, {x2}) outside the plate cross-section")
        if not 0.0 <= x3 <= self.cfg.h:
            raise DomainError(f"x3={x3} outside [0, {self.cfg.h}]")
        if t < 0.0:
            raise DomainError("t must be >= 0")

    def reduced_solution(self, x1: float, x2: float, x3: float, t: float) -> float:
        """Static profile plus the leading-rate planar convolution.

        The integral term never reads x3; only the static profile does.
        """
        if not self.cfg.robin.asymptotic_valid:
            raise DomainError(f"reduced model requires a*h <= 1/3; got {self.cfg.a * self.cfg.h}")
        self._check_point(x1, x2, x3, t)
        base = self.profile(x3)
        if self.cfg.source is None or t == 0.0:
            return base
        a1 = self.spectrum.alpha(1)
        phi = self.modes.eval_point(x1, x2)
        integral = float(np.sum(phi * self._reduced_convolution(t)))
        return base + a1 * a1 / (2.0 * self.cfg.a) * integral

    def reduced_truncation_bound(self) -> float:
        """Certified bound on the planar truncation of the reduced integral."""
        if self.cfg.source is None:
            return 0.0
        a1sq = self.spectrum.alpha(1) ** 2
        resid = math.sqrt(self._res2_top) + math.sqrt(self._res2_bot)
        return a1sq / (2.0 * self.cfg.a) * resid * self._planar_tail_factor(a1sq)

    def full_solution(self, x1: float, x2: float, x3: float, t: float) -> tuple[float, float]:
        """Truncated modal solution and its certified truncation bound."""
        self._check_point(x1, x2, x3, t)
        base = self.profile(x3)
        if self.cfg.source is None or t == 0.0:
            return base, 0.0
        contrib = self._mode_values(x1, x2, x3, t)
        return base + float(np.sum(contrib)), self.full_truncation_bound(t)

    def _mode_values(self, x1: float, x2: float, x3: float, t: float) -> np.ndarray:
        """Per-transverse-mode contributions, shape (M,)."""
        itop, ibot = self._full_convolutions(t)
        phi = self.modes.eval_point(x1, x2)
        vx = mode_shape(self.spectrum.alphas, self.cfg.a, x3)
        per_mode = itop @ phi * self._v_top + ibot @ phi * self._v_bot
        return 2.0 * vx / self._denom * per_mode

    def mode_contribution(self, m: int, x1: float, x2: float, x3: float, t: float) -> float:
        """Contribution of transverse mode m to the full solution."""
        if not (1 <= m <= self.M):
            raise ValueError(f"mode {m} outside 1..{self.M}")
        if self.cfg.source is None or t == 0.0:
            return 0.0
        return float(self._mode_values(x1, x2, x3, t)[m - 1])

    def full_truncation_bound(self, t: float) -> float:
        """Transverse tail (modes > M) plus planar tail (modes > K)."""
        if self.cfg.source is None:
            return 0.0
        transverse = tail_contribution_bound(self.spectrum, self.M, self.sup_F(t))
        a = self.cfg.a
        alphas = self.spectrum.alphas
        v_abs = alphas + a  # >= |V_m(z)| on [0, h]
        planar = 0.0
        rt = math.sqrt(self._res2_top)
        rb = math.sqrt(self._res2_bot)
        for m in range(self.M):
            cs = self._planar_tail_factor(float(alphas[m] ** 2))
            pre = 2.0 * v_abs[m] / self._denom[m]
            planar += pre * (abs(self._v_top[m]) * rt + abs(self._v_bot[m]) * rb) * cs
        return transverse + planar

    def certificate(self, t: float) -> float:
        """Model-error budget: (19 h / 3) sup|F| plus both truncation bounds."""
        return (
            error_certificate(self.cfg, t)
            + self.full_truncation_bound(t)
            + self.reduced_truncation_bound()
        )

    def sample(self, x1: float, x2: float, x3: float, t: float) -> SolutionSample:
        full, slack_full = self.full_solution(x1, x2, x3, t)
        reduced = self.reduced_solution(x1, x2, x3, t)
        slack = slack_full + self.reduced_truncation_bound()
        return SolutionSample(
            x1=x1, x2=x2, x3=x3, t=t,
            value_full=full,
            value_reduced=reduced,
            truncation_slack=slack,
            certificate=error_certificate(self.cfg, t) + slack,
        )

    def sample_grid(self, nx: int, ny: int, nt: int, t_end: float):
        """Deterministic evaluation grid: nx*ny planar points, thickness
        levels {0, h/2, h}, nt output times in (0, t_end]."""
        x1s = np.linspace(0.0, self.cfg.L1, nx)
        x2s = np.linspace(0.0, self.cfg.L2, ny)
        x3s = [0.0, 0.5 * self.cfg.h, self.cfg.h]
        ts = np.linspace(t_end / nt, t_end, nt)
        return [
            (float(x1), float(x2), float(x3), float(t))
            for t in ts for x3 in x3s for x1 in x1s for x2 in x2s
        ]


# ---------------------------------------------------------------------------
# Source constructors


def constant_source(F0: float, t_end: float, n_samples: int = 2) -> SurfaceSource:
    """Time-independent uniform source F0 on both faces."""
    from .planar import UniformField

    times = np.linspace(0.0, t_end, n_samples)
    field = UniformField(F0)
    fields = (field,) * n_samples
    return SurfaceSource(times=times, top=fields, bottom=fields)


def gaussian_source(
    amplitude: float,
    center: tuple[float, float],
    sigma: float,
    t_end: float,
    n_samples: int,
) -> SurfaceSource:
    """Time-independent Gaussian spot on both faces."""
    from .planar import GaussianSpot

    times = np.linspace(0.0, t_end, n_samples)
    field = GaussianSpot(amplitude, center, sigma)
    fields = (field,) * n_samples
    return SurfaceSource(times=times, top=fields, bottom=fields)
