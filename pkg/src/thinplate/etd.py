"""Exact convolution of decaying exponentials against piecewise-linear data.

For stiff decay rates mu (mu ~ 2a/h as the slab thins) the integral

    I(mu) = integral_0^t exp(-mu (t - s)) c(s) ds

is evaluated in closed form per sample interval of the piecewise-linear
c(s); a short series replaces the closed form when mu*ds is tiny, avoiding
catastrophic cancellation.  The data is held constant beyond its last sample.
"""

from __future__ import annotations

import numpy as np

# Below this value of mu*ds the closed form for phi2 cancels; the quintic
# Taylor truncation error at the cutoff is ~2e-14 relative.
SERIES_CUTOFF = 1e-2


def _phi1(x):
    """(1 - exp(-x))/x, stable for all x > 0."""
    return -np.expm1(-x) / x


def _phi2(x):
    """(x - 1 + exp(-x))/x^2 with a series branch for small x."""
    series = 0.5 - x / 6.0 + x**2 / 24.0 - x**3 / 120.0 + x**4 / 720.0
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (x + np.expm1(-x)) / (x * x)
    return np.where(x < SERIES_CUTOFF, series, closed)


def exp_conv_linear(mu: np.ndarray, times: np.ndarray, vals: np.ndarray, t: float) -> np.ndarray:
    """I(mu) for each decay rate, all sharing the sample grid.

    mu    : array of decay rates, shape S (> 0)
    times : increasing sample instants, times[0] == 0, shape (J,)
    vals  : samples c(times[j]), shape (J,) + S
    t     : upper integration limit, >= 0

    Returns an array of shape S.
    """
    mu = np.asarray(mu, float)
    times = np.asarray(times, float)
    vals = np.asarray(vals, float)
    if times[0] != 0.0:
        raise ValueError("sample grid must start at 0")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("sample instants must be strictly increasing")
    out = np.zeros_like(np.broadcast_to(mu, vals.shape[1:]), dtype=float)
    if t <= 0.0:
        return out

    # Knots of the integrand on [0, t]: sample instants below t, then t itself
    # (interpolated, or held constant past the last sample).
    if t >= times[-1]:
        knots = np.concatenate([times, [t]])
        kvals = np.concatenate([vals, vals[-1:]], axis=0)
    else:
        j = int(np.searchsorted(times, t, side="right"))
        frac = (t - times[j - 1]) / (times[j] - times[j - 1])
        v_t = vals[j - 1] + frac * (vals[j] - vals[j - 1])
        knots = np.concatenate([times[:j], [t]])
        kvals = np.concatenate([vals[:j], v_t[None]], axis=0)

    for i in range(len(knots) - 1):
        ds = knots[i + 1] - knots[i]
        if ds == 0.0:
            continue
        tau1 = t - knots[i + 1]
        c0 = kvals[i]
        slope = (kvals[i + 1] - kvals[i]) / ds
        x = mu * ds
        e1 = np.exp(-mu * tau1)
        A = e1 * ds * _phi1(x)
        B = e1 * ds * ds * _phi2(x)
        out += c0 * A + slope * B
    return out
