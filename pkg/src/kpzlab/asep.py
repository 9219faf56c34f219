"""Continuous-time ASEP simulator with double-sided Bernoulli initial data.

The event loop is the superposition of per-particle exponential clocks:
each event picks a uniform particle and a direction with odds R : L and
attempts the jump, suppressing it if the target is occupied (the standard
graphical construction).  Simulation lives on a finite window sized from
the light cone, W = |x| + ceil(3 (R+L) T) + 20; influence leaking in from
outside the window is tracked by contamination fronts, and a sample whose
fronts reach the measurement region is resimulated on a doubled window
rather than silently truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _sim
from .params import ASEPParams


class WindowOverflow(RuntimeError):
    """Light-cone guard tripped; enlarge the window and resimulate."""


def default_window(params: ASEPParams, x: int, T: float) -> int:
    return abs(x) + math.ceil(3.0 * (params.R + params.L) * T) + 20


def simulate_current(
    params: ASEPParams, x: int, T: float, seed: int, sample_index: int = 0
) -> int:
    """One sample of the current J_T(x); deterministic given (seed, index).

    Retries on a doubled window (up to twice) if the light-cone guard trips;
    raises WindowOverflow if even the largest window is contaminated.
    """
    W = default_window(params, x, T)
    key = np.uint64(_py_key(seed, sample_index))
    for _ in range(3):
        J, ok, _ = _sim.asep_current(params.L, params.R, params.b1, params.b2, x, T, W, key)
        if ok:
            return int(J)
        W *= 2
    raise WindowOverflow(f"contamination reached the measurement region even at W={W}")


def _py_key(seed: int, index: int) -> int:
    from .rng import derive_key

    return derive_key(seed, index)


@dataclass(frozen=True)
class CurrentSample:
    """Monte Carlo batch of the current observable."""

    J: np.ndarray
    occ0: np.ndarray  # occupancy of site 0 at time T (stationarity probe)

    @property
    def mean(self) -> float:
        return float(self.J.mean())

    @property
    def variance(self) -> float:
        return float(self.J.var(ddof=1))


def simulate_current_batch(
    params: ASEPParams, x: int, T: float, n_samples: int, seed: int
) -> CurrentSample:
    """n_samples independent currents (thread-parallel, seed-stable)."""
    W = default_window(params, x, T)
    for _ in range(3):
        J, oks, occ0 = _sim.asep_current_batch(
            params.L, params.R, params.b1, params.b2, x, T, W,
            np.uint64(seed & (2**64 - 1)), n_samples,
        )
        if oks.all():
            return CurrentSample(J=J, occ0=occ0)
        W *= 2
    raise WindowOverflow(f"contamination persisted at W={W}")


def stationary_current_moments(
    params: ASEPParams, T: float, n_samples: int, seed: int, c: float = 0.0
) -> tuple[float, float, CurrentSample]:
    """Mean and variance of J_T(x) on the characteristic line x = (1-2b)(R-L)T.

    Requires stationary data b1 = b2; returns (mean, variance, samples).
    """
    if not params.stationary:
        raise ValueError("stationary moments need b1 = b2")
    b = params.b1
    x = int(round((1.0 - 2.0 * b) * (params.R - params.L) * T))
    sample = simulate_current_batch(params, x, T, n_samples, seed)
    return sample.mean, sample.variance, sample


def two_sample_ks(a: np.ndarray, b: np.ndarray) -> float:
    """Sup-distance between the empirical CDFs of two integer samples."""
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    grid = np.arange(lo, hi + 1)
    ca = np.searchsorted(np.sort(a), grid, side="right") / len(a)
    cb = np.searchsorted(np.sort(b), grid, side="right") / len(b)
    return float(np.max(np.abs(ca - cb)))


def degeneration_check(
    params: ASEPParams,
    eps: float,
    x: int,
    T: float,
    n_samples: int,
    seed: int,
) -> float:
    """Two-sample KS distance between the six-vertex height and the ASEP current.

    Simulates H(x + N, N) with N = floor(T/eps) under the six-vertex model
    with turn probabilities (eps L, eps R) and matched Bernoulli data, and
    J_T(x) under the ASEP; both converge in law as eps -> 0.
    """
    d1, d2 = eps * params.L, eps * params.R
    if not (0.0 <= d1 < 1.0 and 0.0 < d2 < 1.0):
        raise ValueError(f"eps gives invalid probabilities ({d1}, {d2})")
    N = int(math.floor(T / eps))
    X = x + N
    if X < 1 or N < 1:
        raise ValueError("window degenerate; increase T or reduce eps")
    h = _sim.vertex_height_batch(
        d1, d2, X, N, _sim.MODE_BERNOULLI, params.b1, params.b2,
        np.uint64(seed & (2**64 - 1)), n_samples, X,
    )
    asep = simulate_current_batch(params, x, T, n_samples, seed + 1)
    return two_sample_ks(h, asep.J)
