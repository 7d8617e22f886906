"""Compiled per-path simulation kernels for :mod:`zerocross.mcoracle`.

Every kernel walks exact Gaussian increments ``N(mu h, h)`` on a grid of
step ``dt`` (the last step is shortened to land on the horizon).  With
``bridge`` set, zeros and extremes inside a step are handled with the exact
Brownian-bridge laws, so event detection carries no grid bias:

* a step from ``x`` to ``y`` with ``x y > 0`` hits zero with probability
  ``exp(-2 x y / h)``;
* the bridge maximum is ``(x + y + sqrt((y - x)**2 - 2 h log U)) / 2``.

Zero times are placed uniformly inside the step where they were detected.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# exp(-2xy/h) below exp(-40) is treated as no crossing
_CROSS_CUTOFF = 20.0
# bridge excursions beyond 6 sqrt(h) above the endpoints have probability < e^-72
_EXCURSION_CUTOFF = 6.0
# a path drifting away from zero from distance x returns with probability
# exp(-2 |mu| x); stop following it once this is below 1e-15
_ESCAPE_LOG = 34.6


@njit(cache=True)
def _grid(horizon, dt):
    q = horizon / dt
    n = int(math.floor(q + 1e-9))
    rem = horizon - n * dt
    if rem < 1e-9 * dt:
        rem = 0.0
    return n, rem


@njit(cache=True)
def _crosses(rng, x, y, h, bridge):
    p = x * y
    if p <= 0.0:
        return True
    if bridge and p < _CROSS_CUTOFF * h:
        return rng.random() < math.exp(-2.0 * p / h)
    return False


@njit(cache=True)
def _last_zero_walk(rng, mu, horizon, dt, bridge):
    """(last zero before horizon, position at horizon) for a path from 0."""
    n, rem = _grid(horizon, dt)
    x = 0.0
    s = 0.0
    zero_at = 0.0
    zero_len = 0.0
    for i in range(n + 1):
        h = dt if i < n else rem
        if h <= 0.0:
            break
        y = x + mu * h + math.sqrt(h) * rng.standard_normal()
        if _crosses(rng, x, y, h, bridge):
            zero_at = s
            zero_len = h
        x = y
        s += h
    return zero_at + zero_len * rng.random(), x


@njit(cache=True, nogil=True)
def last_zero_kernel(rng, mu, t, dt, bridge, out):
    for k in range(out.shape[0]):
        out[k] = _last_zero_walk(rng, mu, t, dt, bridge)[0]


@njit(cache=True, nogil=True)
def zero_pair_kernel(rng, mu, t, horizon, dt, bridge, out_a, out_b, out_cens):
    """Last zero before t and first zero in (t, horizon]; censored otherwise."""
    amu = abs(mu)
    for k in range(out_a.shape[0]):
        a, x = _last_zero_walk(rng, mu, t, dt, bridge)
        out_a[k] = a
        out_b[k] = np.nan
        out_cens[k] = True
        s = t
        while s < horizon:
            h = min(dt, horizon - s)
            if h < 1e-9 * dt:
                break
            y = x + mu * h + math.sqrt(h) * rng.standard_normal()
            if _crosses(rng, x, y, h, bridge):
                out_b[k] = s + h * rng.random()
                out_cens[k] = False
                break
            x = y
            s += h
            if mu * x > 0.0 and 2.0 * amu * abs(x) > _ESCAPE_LOG:
                break


@njit(cache=True)
def _extremes_walk(rng, mu, horizon, dt, bridge):
    n, rem = _grid(horizon, dt)
    x = 0.0
    hi = 0.0
    lo = 0.0
    for i in range(n + 1):
        h = dt if i < n else rem
        if h <= 0.0:
            break
        sh = math.sqrt(h)
        y = x + mu * h + sh * rng.standard_normal()
        if bridge:
            d2 = (y - x) * (y - x)
            if max(x, y) + _EXCURSION_CUTOFF * sh > hi:
                m = 0.5 * (x + y + math.sqrt(d2 - 2.0 * h * math.log(1.0 - rng.random())))
                if m > hi:
                    hi = m
            if min(x, y) - _EXCURSION_CUTOFF * sh < lo:
                m = 0.5 * (x + y - math.sqrt(d2 - 2.0 * h * math.log(1.0 - rng.random())))
                if m < lo:
                    lo = m
        else:
            if y > hi:
                hi = y
            if y < lo:
                lo = y
        x = y
    return x, hi, lo


@njit(cache=True, nogil=True)
def extremes_kernel(rng, mu, t, dt, bridge, out_end, out_max, out_min):
    for k in range(out_end.shape[0]):
        e, hi, lo = _extremes_walk(rng, mu, t, dt, bridge)
        out_end[k] = e
        out_max[k] = hi
        out_min[k] = lo


@njit(cache=True, nogil=True)
def nested_kernel(rng, drifts, t, dt, bridge, out):
    """drifts[-1] runs on [0, t]; each earlier level runs up to the next one's zero."""
    depth = drifts.shape[0]
    for k in range(out.shape[0]):
        horizon = t
        for j in range(depth - 1, -1, -1):
            horizon = _last_zero_walk(rng, drifts[j], horizon, dt, bridge)[0]
        out[k] = horizon


@njit(cache=True, nogil=True)
def iterated_kernel(rng, mu1, mu2, t, dt, bridge, one_sided, out_horizon, out):
    """Inner max |B2| (or max B2) over [0, t] sets the horizon of the outer last zero."""
    for k in range(out.shape[0]):
        e, hi, lo = _extremes_walk(rng, mu2, t, dt, bridge)
        w = hi if one_sided else max(hi, -lo)
        out_horizon[k] = w
        if w <= 0.0:
            out[k] = 0.0
        else:
            out[k] = _last_zero_walk(rng, mu1, w, dt, bridge)[0]
