"""Compiled Monte Carlo kernels (numba) for the vertex model and the ASEP.

All randomness is counter-based splitmix64 keyed by (sample key, absolute
counter), so results are reproducible and independent of sweep order, batch
split, and thread count.  Counter layout:

  vertex model:  vertex coin   (y << 21) | (x << 1)
                 y-axis coin   (y << 21) | 1
                 x-axis coin   (x << 1) | 1          (y = 0)
  ASEP:          site-occupancy coin   2*(site + 2^20)
                 event-count draws     2^41 + k
                 per-event hash        2^42 + event
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

_U64 = np.uint64
_GAMMA = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, inline="always")
def _mix64(z):
    z = z + _GAMMA
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(cache=True, inline="always")
def _u01(key, ctr):
    h = _mix64(key ^ (ctr * _MIX1))
    return np.float64(h >> _U64(11)) * _INV53


@njit(cache=True, inline="always")
def _derive_key(seed, index):
    return _mix64(_mix64(seed) ^ (_U64(index) * _GAMMA))


# ---------------------------------------------------------------------------
# six-vertex model
# ---------------------------------------------------------------------------

# boundary modes
MODE_STEP = 0
MODE_BERNOULLI = 1
MODE_EXPLICIT = 2


@njit(cache=True)
def vertex_height(d1, d2, X, Y, mode, b1, b2, ybits, xbits, key, measure_col):
    """Height H(measure_col, Y) = (#blue crossings right of measure_col) - (#red entries <= measure_col).

    Sweeps columns 1..measure_col row by row, left to right (columns to the
    right cannot influence the count).  Returns the signed crossing count:
    horizontal arrows leaving column `measure_col` minus vertical entrances
    on the x-axis in columns 1..measure_col.
    """
    v = np.zeros(X, dtype=np.int8)
    v_in = 0
    for c in range(X):
        if mode == MODE_BERNOULLI:
            bit = 1 if _u01(key, _U64((c + 1) << 1) | _U64(1)) < b2 else 0
        elif mode == MODE_EXPLICIT:
            bit = xbits[c]
        else:
            bit = 0
        v[c] = bit
        if bit and c < measure_col:
            v_in += 1
    h_out = 0
    for y in range(1, Y + 1):
        if mode == MODE_BERNOULLI:
            h = 1 if _u01(key, _U64(y << 21) | _U64(1)) < b1 else 0
        elif mode == MODE_EXPLICIT:
            h = ybits[y - 1]
        else:
            h = 1
        for c in range(measure_col):
            i1 = v[c]
            if i1 == 0 and h == 0:
                continue
            if i1 == 1 and h == 1:
                continue
            u = _u01(key, _U64((y << 21)) | _U64((c + 1) << 1))
            if i1 == 1:  # (1,0): continue up w.p. d1, else turn right
                if u >= d1:
                    v[c] = 0
                    h = 1
            else:  # (0,1): continue right w.p. d2, else turn up
                if u >= d2:
                    v[c] = 1
                    h = 0
        h_out += h
    return h_out - v_in


@njit(cache=True, parallel=True)
def vertex_height_batch(d1, d2, X, Y, mode, b1, b2, seed, n_samples, measure_col):
    out = np.empty(n_samples, dtype=np.int64)
    dummy = np.zeros(1, dtype=np.int8)
    for i in prange(n_samples):
        key = _derive_key(_U64(seed), i)
        out[i] = vertex_height(d1, d2, X, Y, mode, b1, b2, dummy, dummy, key, measure_col)
    return out


@njit(cache=True)
def vertex_entrance_probe(d1, d2, X, Y, b1, b2, key, x0, y0, n_ray):
    """Entrance indicators along the rays from (x0, y0).

    Returns (vert, horiz): vert[i] = vertical entrance at (x0 + i, y0),
    horiz[i] = horizontal entrance at (x0, y0 + i), for i < n_ray.
    Requires x0 + n_ray <= X + 1 and y0 + n_ray <= Y + 1.
    """
    v = np.zeros(X, dtype=np.int8)
    for c in range(X):
        v[c] = 1 if _u01(key, _U64((c + 1) << 1) | _U64(1)) < b2 else 0
    vert = np.zeros(n_ray, dtype=np.int8)
    horiz = np.zeros(n_ray, dtype=np.int8)
    for y in range(1, Y + 1):
        if y == y0:
            for i in range(n_ray):
                vert[i] = v[x0 - 1 + i]
        h = 1 if _u01(key, _U64(y << 21) | _U64(1)) < b1 else 0
        for c in range(X):
            if c == x0 - 1 and y >= y0 and y - y0 < n_ray:
                horiz[y - y0] = h
            i1 = v[c]
            if (i1 == 0 and h == 0) or (i1 == 1 and h == 1):
                continue
            u = _u01(key, _U64(y << 21) | _U64((c + 1) << 1))
            if i1 == 1:
                if u >= d1:
                    v[c] = 0
                    h = 1
            else:
                if u >= d2:
                    v[c] = 1
                    h = 0
    return vert, horiz


@njit(cache=True, parallel=True)
def vertex_entrance_probe_batch(d1, d2, X, Y, b1, b2, seed, n_samples, x0, y0, n_ray):
    vert = np.zeros((n_samples, n_ray), dtype=np.int8)
    horiz = np.zeros((n_samples, n_ray), dtype=np.int8)
    for i in prange(n_samples):
        key = _derive_key(_U64(seed), i)
        vv, hh = vertex_entrance_probe(d1, d2, X, Y, b1, b2, key, x0, y0, n_ray)
        vert[i] = vv
        horiz[i] = hh
    return vert, horiz


# ---------------------------------------------------------------------------
# ASEP
# ---------------------------------------------------------------------------

_CTR_EVENT_BASE = _U64(1) << _U64(42)
_CTR_POISSON_BASE = _U64(1) << _U64(41)
_CTR_SITE_BASE = 1 << 20


@njit(cache=True)
def _poisson_count(lam, key, ctr0):
    """Exact Poisson(lam) draw from counter-based uniforms.

    Multiplicative inversion below lam = 12; PTRS transformed rejection
    above (Hoermann's algorithm, exact for lam >= 10).
    """
    ctr = ctr0
    if lam < 12.0:
        L = np.exp(-lam)
        k = 0
        p = 1.0
        while True:
            p *= _u01(key, ctr)
            ctr += _U64(1)
            if p <= L:
                return k
            k += 1
    smu = np.sqrt(lam)
    b = 0.931 + 2.53 * smu
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    loglam = np.log(lam)
    while True:
        u = _u01(key, ctr) - 0.5
        v = _u01(key, ctr + _U64(1))
        ctr += _U64(2)
        us = 0.5 - abs(u)
        k = int(np.floor((2.0 * a / us + b) * u + lam + 0.43))
        if us >= 0.07 and v <= vr:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = np.log(v * inv_alpha / (a / (us * us) + b))
        rhs = -lam + k * loglam - math.lgamma(k + 1.0)
        if lhs <= rhs:
            return k


@njit(cache=True)
def asep_current(L, R, b1, b2, x, T, W, key):
    """Current J_T(x) of the ASEP on the window [-W, W].

    Initial data: Bernoulli(b1) on sites <= 0, Bernoulli(b2) on sites > 0.
    Colors: blue = initial position <= 0, red = initial position > 0;
    J = #blue now right of x  -  #red now at or left of x.

    Event loop is the superposition of per-particle clocks: each attempt
    picks a uniform particle and a direction with odds R : L; attempts into
    occupied sites (or off-window) are suppressed.  Because the total
    attempt rate (n + 2)(R + L) is constant, the number of events in [0, T]
    is drawn once as an exact Poisson count instead of accumulating
    exponential waits.  Influence from outside the window is tracked by
    contamination fronts advanced by every clock ring touching them plus
    one dominating boundary clock per side (the two extra rate slots).

    Returns (J, ok, occ0); ok = False signals that the contamination fronts
    reached the measurement region and the caller must enlarge the window.
    """
    size = 2 * W + 1
    occ = np.zeros(size, dtype=np.int8)
    n = 0
    for idx in range(size):
        site = idx - W
        b = b1 if site <= 0 else b2
        if _u01(key, _U64(2 * (site + _CTR_SITE_BASE))) < b:
            occ[idx] = 1
            n += 1
    pos = np.empty(max(n, 1), dtype=np.int64)
    j = 0
    n_blue = 0
    for idx in range(size):
        if occ[idx]:
            pos[j] = idx - W
            if idx - W <= 0:
                n_blue += 1
            j += 1

    f_left = -W - 1  # sites <= f_left may differ from the infinite system
    f_right = W + 1
    rl = R + L
    n_slots = n + 2
    if n > 0:
        n_events = _poisson_count(n_slots * rl * T, key, _CTR_POISSON_BASE)
        thresh_right = _U64(int(R / rl * 16777216.0))  # 24-bit direction cutoff
        ctr = _CTR_EVENT_BASE
        for _ in range(n_events):
            h = _mix64(key ^ (ctr * _MIX1))
            ctr += _U64(1)
            slot = int(((h >> _U64(24)) * _U64(n_slots)) >> _U64(40))
            if slot >= n:
                # dominating boundary clock: advance one front
                if slot == n:
                    f_left += 1
                else:
                    f_right -= 1
                continue
            go_right = (h & _U64(0xFFFFFF)) < thresh_right
            p = pos[slot]
            tgt = p + 1 if go_right else p - 1
            a = p if go_right else tgt  # left site of the rung edge
            if a <= f_left:
                f_left = a + 1 if a + 1 > f_left else f_left
            if a + 1 >= f_right:
                f_right = a if a < f_right else f_right
            if tgt < -W or tgt > W:
                continue
            if occ[tgt + W] == 1:
                continue
            occ[p + W] = 0
            occ[tgt + W] = 1
            pos[slot] = tgt

    ok = True
    if f_left >= min(0, x) or f_right <= max(0, x):
        ok = False
    if n > 0:
        if n_blue > 0 and pos[n_blue - 1] >= f_right:
            ok = False
        if n_blue < n and pos[n_blue] <= f_left:
            ok = False

    J = 0
    for i in range(n_blue):
        if pos[i] > x:
            J += 1
    for i in range(n_blue, n):
        if pos[i] <= x:
            J -= 1
    occ0 = occ[W]
    return J, ok, occ0


@njit(cache=True)
def _asep_final_occupancy(L, R, b1, b2, T, W, key):
    """Final occupancy vector on [-W, W] with blocked boundaries (oracle probe)."""
    size = 2 * W + 1
    occ = np.zeros(size, dtype=np.int8)
    n = 0
    for idx in range(size):
        site = idx - W
        b = b1 if site <= 0 else b2
        if _u01(key, _U64(2 * (site + _CTR_SITE_BASE))) < b:
            occ[idx] = 1
            n += 1
    pos = np.empty(max(n, 1), dtype=np.int64)
    j = 0
    for idx in range(size):
        if occ[idx]:
            pos[j] = idx - W
            j += 1
    rl = R + L
    if n > 0:
        n_events = _poisson_count(n * rl * T, key, _CTR_POISSON_BASE)
        thresh_right = _U64(int(R / rl * 16777216.0))
        ctr = _CTR_EVENT_BASE
        for _ in range(n_events):
            h = _mix64(key ^ (ctr * _MIX1))
            ctr += _U64(1)
            slot = int(((h >> _U64(24)) * _U64(n)) >> _U64(40))
            go_right = (h & _U64(0xFFFFFF)) < thresh_right
            p = pos[slot]
            tgt = p + 1 if go_right else p - 1
            if tgt < -W or tgt > W:
                continue
            if occ[tgt + W] == 1:
                continue
            occ[p + W] = 0
            occ[tgt + W] = 1
            pos[slot] = tgt
    return occ


@njit(cache=True, parallel=True)
def asep_occupancy_batch(L, R, b1, b2, T, W, seed, n_samples):
    out = np.zeros((n_samples, 2 * W + 1), dtype=np.int8)
    for i in prange(n_samples):
        key = _derive_key(_U64(seed), i)
        out[i] = _asep_final_occupancy(L, R, b1, b2, T, W, key)
    return out


@njit(cache=True, parallel=True)
def asep_current_batch(L, R, b1, b2, x, T, W, seed, n_samples):
    out = np.empty(n_samples, dtype=np.int64)
    oks = np.ones(n_samples, dtype=np.int8)
    occ0 = np.zeros(n_samples, dtype=np.int8)
    for i in prange(n_samples):
        key = _derive_key(_U64(seed), i)
        J, ok, o0 = asep_current(L, R, b1, b2, x, T, W, key)
        out[i] = J
        oks[i] = 1 if ok else 0
        occ0[i] = o0
    return out, oks, occ0
