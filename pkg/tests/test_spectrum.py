import math

import numpy as np
import pytest

from thinplate.errors import ConvergenceError, DomainError
from thinplate.spectrum import (
    RobinParams,
    alpha1_bounds,
    bracket,
    build_spectrum,
    eigen_residual,
    scan_eigenvalues,
    solve_alpha,
)

P = RobinParams(a=1.0, h=0.1)

# Frozen via the dense-scan + bisection oracle (refine_scan below).
ALPHA1_PINNED = 4.435207878818885


def refine_scan(p, lo, hi, iters=80):
    """Independent root refinement: plain bisection inside a scan interval."""
    flo = eigen_residual(lo, p)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = eigen_residual(mid, p)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def test_residual_zero_at_origin():
    assert eigen_residual(0.0, P) == 0.0


def test_residual_small_at_root():
    a1 = solve_alpha(1, P)
    assert abs(eigen_residual(a1, P)) <= 1e-12 * (a1**2 + P.a**2)


def test_residual_single_sign_change_in_second_bracket():
    lo, hi = bracket(2, P)
    qs = np.linspace(lo, hi, 10_001)
    signs = np.sign(eigen_residual(qs, P))
    flips = np.sum(signs[:-1] * signs[1:] < 0)
    assert flips == 1


def test_bracket_locations():
    lo, hi = bracket(2, P)
    assert 31.4159 <= lo and hi <= 47.1239
    lo1, hi1 = bracket(1, P)
    assert 0.0 < lo1 and hi1 < 15.7080


def test_bracket_rejects_thick_slab():
    with pytest.raises(DomainError):
        bracket(2, RobinParams(a=1.0, h=2.0))


def test_alpha1_inside_certified_sandwich():
    a1 = solve_alpha(1, P)
    assert 4.20317 <= a1 <= 4.58258


def test_alpha1_pinned_matches_oracle():
    a1 = solve_alpha(1, P)
    assert a1 == pytest.approx(ALPHA1_PINNED, rel=1e-14)
    # independent route: dense scan + plain bisection
    iv = scan_eigenvalues(P, 10.0, 1e-3)
    assert len(iv) == 1
    assert refine_scan(P, *iv[0]) == pytest.approx(ALPHA1_PINNED, rel=1e-12)


def test_alpha3_in_lemma_bracket():
    p = RobinParams(a=0.5, h=0.05)
    a3 = solve_alpha(3, p)
    assert 2 * math.pi / 0.05 <= a3 <= 2 * math.pi / 0.05 + math.pi / 0.1


def test_alpha1_bounds_values():
    lo, hi = alpha1_bounds(P)
    assert lo == pytest.approx(4.20317, abs=1e-5)
    assert hi == pytest.approx(4.58258, abs=1e-5)
    assert hi <= math.sqrt(30.0)


def test_alpha1_bounds_rejects_large_ah():
    with pytest.raises(DomainError):
        alpha1_bounds(RobinParams(a=3.0, h=0.2))


def test_build_spectrum_increasing_and_bracketed():
    spec = build_spectrum(P, 5)
    assert len(spec.alphas) == 5
    assert np.all(np.diff(spec.alphas) > 0.0)
    assert 4.203 <= spec.alpha(1) <= 4.583
    for m in range(2, 6):
        assert spec.alpha(m) >= (m - 1) * math.pi / P.h


def test_build_spectrum_singleton():
    spec = build_spectrum(P, 1)
    assert spec.M == 1


def test_scan_matches_spectrum():
    spec = build_spectrum(P, 3)
    q_max = 2.9 * math.pi / P.h
    ivals = scan_eigenvalues(P, q_max, 1e-3)
    assert len(ivals) == 3
    for m, (lo, hi) in enumerate(ivals, start=1):
        assert abs(refine_scan(P, lo, hi) - spec.alpha(m)) <= 1e-9


def test_no_root_below_a():
    assert scan_eigenvalues(P, P.a / 2.0, 1e-4) == []


def test_solve_alpha_agrees_with_solo_bisection_many_params():
    for a in (0.5, 1.0, 2.0):
        for h in (0.3 / a, 0.1 / a, 0.03 / a):
            p = RobinParams(a=a, h=h)
            spec = build_spectrum(p, 4)
            lo33, hi33 = alpha1_bounds(p)
            assert lo33 <= spec.alpha(1) <= hi33
            for m in range(1, 5):
                lo, hi = spec.brackets[m - 1]
                assert lo <= spec.alpha(m) <= hi


def test_asymptotic_ratio_on_geometric_grid():
    prev = None
    for h in np.geomspace(1e-1, 1e-5, 9):
        p = RobinParams(a=1.0, h=float(h))
        r = solve_alpha(1, p) * math.sqrt(h / 2.0)
        assert abs(r - 1.0) <= 1.1 * 1.0 * h
        if prev is not None:
            assert abs(r - 1.0) <= prev
        prev = abs(r - 1.0)


def test_tan_sandwich_inequality():
    z = np.linspace(0.0, 1.0, 201)[1:]
    t = np.tan(z)
    assert np.all(z + z**3 / 3.0 <= t)
    assert np.all(t <= z + 2.0 * z**3 / 3.0)


def test_validity_flags():
    assert P.bracket_valid and P.asymptotic_valid
    mid = RobinParams(a=1.0, h=1.0)  # 1/3 < a*h < pi/2
    assert mid.bracket_valid and not mid.asymptotic_valid
    # solver still runs in the intermediate regime
    assert solve_alpha(1, mid) > 0.0


def test_convergence_error_on_fabricated_bad_bracket():
    from thinplate.spectrum import _bisect_newton

    with pytest.raises(ConvergenceError):
        _bisect_newton(np.array([0.1]), np.array([0.2]), P)
