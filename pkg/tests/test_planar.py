import math
import warnings

import numpy as np
import pytest

from thinplate import planar as pl
from thinplate.errors import QuadratureWarning, TruncationError

L1, L2 = 1.0, 0.7


@pytest.fixture(scope="module")
def modes():
    return pl.planar_modes(L1, L2, 40)


def test_mode_ordering(modes):
    lam = modes.lam
    assert np.all(np.diff(lam) >= -1e-14)
    assert modes.k1[0] == 0 and modes.k2[0] == 0
    assert lam[0] == 0.0


def test_eigenvalue_formula(modes):
    expect = math.pi**2 * (modes.k1**2 / L1**2 + modes.k2**2 / L2**2)
    assert modes.lam == pytest.approx(expect, rel=1e-15)


def test_orthonormality(modes):
    # dense trapezoid quadrature oracle for the Gram matrix
    n = 801
    x1 = np.linspace(0.0, L1, n)
    x2 = np.linspace(0.0, L2, n)
    f1, f2 = modes.eval_axes(x1, x2)
    w1 = np.full(n, L1 / (n - 1)); w1[0] *= 0.5; w1[-1] *= 0.5
    w2 = np.full(n, L2 / (n - 1)); w2[0] *= 0.5; w2[-1] *= 0.5
    g1 = (f1 * w1) @ f1.T
    g2 = (f2 * w2) @ f2.T
    gram = g1 * g2
    assert np.max(np.abs(gram - np.eye(modes.K))) < 1e-6


def test_eval_point_matches_axes(modes):
    rng = np.random.default_rng(3)
    for _ in range(10):
        x1 = rng.uniform(0.0, L1)
        x2 = rng.uniform(0.0, L2)
        v = modes.eval_point(x1, x2)
        f1, f2 = modes.eval_axes(np.array([x1]), np.array([x2]))
        assert v == pytest.approx(f1[:, 0] * f2[:, 0], rel=1e-14)


def test_project_uniform(modes):
    c = pl.project_source(pl.UniformField(3.0), modes)
    expect = np.zeros(modes.K)
    expect[0] = 3.0 * math.sqrt(L1 * L2)
    assert c == pytest.approx(expect, abs=1e-13)


def test_project_cosine_is_exact(modes):
    # a pure mode must project onto exactly one coefficient
    idx = 5
    k1, k2 = int(modes.k1[idx]), int(modes.k2[idx])

    class CosField:
        def __call__(self, x1, x2):
            return np.cos(k1 * np.pi * np.asarray(x1) / L1) * np.cos(
                k2 * np.pi * np.asarray(x2) / L2
            )

        def sup_on(self, L1_, L2_):
            return 1.0

    c = pl.project_source(CosField(), modes)
    n1 = math.sqrt((2.0 if k1 else 1.0) / L1)
    n2 = math.sqrt((2.0 if k2 else 1.0) / L2)
    expect = np.zeros(modes.K)
    expect[idx] = 1.0 / (n1 * n2)
    assert c == pytest.approx(expect, abs=1e-13)


def test_project_gaussian_parseval(modes):
    f = pl.GaussianSpot(amplitude=1.0, center=(0.4, 0.3), sigma=0.12)
    big = pl.planar_modes(L1, L2, 400)
    c = pl.project_source(f, big, quad_order=64)
    l2sq = pl.face_l2_sq(f, L1, L2)
    resid = l2sq - float(np.sum(c * c))
    assert resid >= -1e-12
    assert resid / l2sq < 1e-5


def test_project_refinement_warning():
    # a needle-thin spot defeats the fixed-order quadrature
    f = pl.GaussianSpot(amplitude=1.0, center=(0.5, 0.35), sigma=0.003)
    ms = pl.planar_modes(L1, L2, 10)
    with pytest.warns(QuadratureWarning):
        pl.project_source(f, ms, quad_order=8)


def test_grid_field_roundtrip():
    xs = np.linspace(0.0, L1, 41)
    ys = np.linspace(0.0, L2, 31)
    vals = np.outer(np.sin(xs), np.cos(ys))
    f = pl.GridField(values=vals, L1=L1, L2=L2)
    assert f(xs[7], ys[11]) == pytest.approx(vals[7, 11], rel=1e-12)
    assert f.sup_on(L1, L2) >= np.max(np.abs(vals)) - 1e-12


def test_semigroup_apply_decay(modes):
    c = np.ones(modes.K)
    out = pl.semigroup_apply(c, modes, 0.3, (0.2, 0.5))
    direct = float(
        np.sum(np.exp(-modes.lam * 0.3) * modes.eval_point(0.2, 0.5))
    )
    assert out == pytest.approx(direct, rel=1e-14)


def test_w_eval_matches_image_sum():
    # reflection / image-charge oracle for the Neumann heat kernel
    ms = pl.planar_modes(L1, L2, 600)
    x, y, dt = (0.31, 0.5), (0.62, 0.22), 0.05

    def image_1d(p, q, L, dt):
        s = 0.0
        for n in range(-40, 41):
            s += math.exp(-((p - q + 2 * n * L) ** 2) / (4 * dt))
            s += math.exp(-((p + q + 2 * n * L) ** 2) / (4 * dt))
        return s / math.sqrt(4 * math.pi * dt)

    oracle = image_1d(x[0], y[0], L1, dt) * image_1d(x[1], y[1], L2, dt)
    val = pl.w_eval(ms, x, y, dt)
    assert val == pytest.approx(oracle, rel=1e-10)


def test_w_eval_mass_conservation():
    ms = pl.planar_modes(L1, L2, 600)
    from numpy.polynomial.legendre import leggauss

    n = 40
    x1g, w1 = leggauss(n)
    x1g = 0.5 * L1 * (x1g + 1.0); w1 = 0.5 * L1 * w1
    x2g, w2 = leggauss(n)
    x2g = 0.5 * L2 * (x2g + 1.0); w2 = 0.5 * L2 * w2
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += w1[i] * w2[j] * pl.w_eval(ms, (0.4, 0.3), (x1g[i], x2g[j]), 0.2)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_w_eval_truncation_error_small_dt():
    ms = pl.planar_modes(L1, L2, 20)
    with pytest.raises(TruncationError):
        pl.w_eval(ms, (0.5, 0.35), (0.5, 0.35), 1e-5)


def test_w_eval_tail_bound_sound():
    # the analytic tail bound must dominate the observed truncation error
    small = pl.planar_modes(L1, L2, 100)
    big = pl.planar_modes(L1, L2, 2000)
    x, y, dt = (0.5, 0.35), (0.45, 0.3), 0.08
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        v_small = pl.w_eval(small, x, y, dt, tail_tol=np.inf)
        v_big = pl.w_eval(big, x, y, dt, tail_tol=np.inf)
    bound = pl.w_eval_tail_bound(small, dt)
    assert abs(v_big - v_small) <= bound
