"""Stochastic six-vertex model: simulators and exact finite-window engines.

Convention for the height (current) at (X, Y): paths entering through the
y-axis are blue, through the x-axis red, and

    H(X, Y) = #{blue paths crossing the line y = Y right of X}
            - #{red paths crossing it at or left of X}.

Pathwise this equals (#horizontal arrows leaving column X in rows 1..Y)
minus (#x-axis entrances in columns 1..X); the color-tracking enumerator
below is kept as the oracle for that identity.  With this orientation the
q-moment and Fredholm identities hold literally and H(x, t) >= -t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _sim
from .params import ParameterDomainError, SixVertexParams
from .qseries import poch_finite, poch_inf, q_laplace_term
from .rng import derive_key, uniform
from .weights import SpecializationParams, weight_W

_DP_MAX = 12


class WindowTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class BoundarySpec:
    """Initial data on the two boundary axes.

    y_mode: "step" (every row enters), "bernoulli" (prob b1), "bits"
    x_mode: "empty", "bernoulli" (prob b2), "bits"
    """

    y_mode: Literal["step", "bernoulli", "bits"]
    x_mode: Literal["empty", "bernoulli", "bits"]
    b1: float = 0.0
    b2: float = 0.0
    y_bits: tuple[int, ...] = ()
    x_bits: tuple[int, ...] = ()

    @classmethod
    def step(cls) -> "BoundarySpec":
        return cls(y_mode="step", x_mode="empty")

    @classmethod
    def double_bernoulli(cls, b1: float, b2: float) -> "BoundarySpec":
        return cls(y_mode="bernoulli", x_mode="bernoulli", b1=b1, b2=b2)

    @classmethod
    def explicit(cls, y_bits: tuple[int, ...], x_bits: tuple[int, ...]) -> "BoundarySpec":
        return cls(y_mode="bits", x_mode="bits", y_bits=tuple(y_bits), x_bits=tuple(x_bits))

    @classmethod
    def empty(cls) -> "BoundarySpec":
        return cls(y_mode="bits", x_mode="bits")

    def y_bit(self, row: int) -> int:
        """Entrance bit of row (1-based); zero beyond the stored vector."""
        return self.y_bits[row - 1] if row - 1 < len(self.y_bits) else 0

    def x_bit(self, col: int) -> int:
        """Entrance bit of column (0-based); zero beyond the stored vector."""
        return self.x_bits[col] if col < len(self.x_bits) else 0

    def check_window(self, X: int, Y: int) -> None:
        # empty tuples mean "no entrances on this axis" at any window size
        if self.y_mode == "bits" and self.y_bits and len(self.y_bits) < Y:
            raise ValueError(f"y_bits has {len(self.y_bits)} rows, window needs {Y}")
        if self.x_mode == "bits" and self.x_bits and len(self.x_bits) < X:
            raise ValueError(f"x_bits has {len(self.x_bits)} columns, window needs {X}")


def vertex_update(i1: int, j1: int, params: SixVertexParams, u: float) -> tuple[int, int]:
    """One Markovian vertex update: (i1, j1) inputs to (i2, j2) outputs.

    Conserving configurations are deterministic; a lone vertical arrow
    continues up with probability delta1, a lone horizontal one continues
    right with probability delta2.
    """
    if i1 == j1:
        return i1, j1
    if i1 == 1:
        return (1, 0) if u < params.delta1 else (0, 1)
    return (0, 1) if u < params.delta2 else (1, 0)


def _mode_codes(boundary: BoundarySpec, X: int, Y: int):
    boundary.check_window(X, Y)
    if boundary.y_mode == "step" and boundary.x_mode == "empty":
        return _sim.MODE_STEP, 0.0, 0.0, np.zeros(1, np.int8), np.zeros(1, np.int8)
    if boundary.y_mode == "bernoulli" and boundary.x_mode == "bernoulli":
        return _sim.MODE_BERNOULLI, boundary.b1, boundary.b2, np.zeros(1, np.int8), np.zeros(1, np.int8)
    if boundary.y_mode == "bits" and boundary.x_mode == "bits":
        yb = np.array([boundary.y_bit(r) for r in range(1, max(Y, 1) + 1)], np.int8)
        xb = np.array([boundary.x_bit(c) for c in range(max(X, 1))], np.int8)
        return _sim.MODE_EXPLICIT, 0.0, 0.0, yb, xb
    raise ValueError(f"unsupported boundary combination {boundary.y_mode}/{boundary.x_mode}")


def simulate_height(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    boundary: BoundarySpec,
    seed: int,
    sample_index: int = 0,
) -> int:
    """One Monte Carlo sample of H(X, Y); deterministic given (seed, index)."""
    if X < 0 or Y < 0:
        raise ValueError("window must be nonnegative")
    mode, b1, b2, yb, xb = _mode_codes(boundary, X, Y)
    if X == 0:
        return 0
    key = derive_key(seed, sample_index)
    return int(
        _sim.vertex_height(delta1, delta2, X, Y, mode, b1, b2, yb, xb, np.uint64(key), X)
    )


def simulate_height_batch(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    boundary: BoundarySpec,
    seed: int,
    n_samples: int,
) -> np.ndarray:
    """n_samples independent copies of H(X, Y) (thread-parallel, seed-stable)."""
    mode, b1, b2, _, _ = _mode_codes(boundary, X, Y)
    if mode == _sim.MODE_EXPLICIT:
        raise ValueError("batch sampling supports step/Bernoulli boundaries")
    return _sim.vertex_height_batch(
        delta1, delta2, X, Y, mode, b1, b2, np.uint64(seed & (2**64 - 1)), n_samples, X
    )


# ---------------------------------------------------------------------------
# color-tracking and diagonal-sweep oracles (small windows)
# ---------------------------------------------------------------------------

_NONE, _RED, _BLUE = 0, 1, 2


def _boundary_bit(mode_tuple, key, axis: str, idx: int) -> int:
    mode, b1, b2, yb, xb = mode_tuple
    if axis == "y":
        if mode == _sim.MODE_STEP:
            return 1
        if mode == _sim.MODE_BERNOULLI:
            return 1 if uniform(key, (idx << 21) | 1) < b1 else 0
        return int(yb[idx - 1]) if idx - 1 < len(yb) else 0
    if mode == _sim.MODE_STEP:
        return 0
    if mode == _sim.MODE_BERNOULLI:
        return 1 if uniform(key, ((idx + 1) << 1) | 1) < b2 else 0
    return int(xb[idx]) if idx < len(xb) else 0


def brute_force_color_height(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    boundary: BoundarySpec,
    seed: int,
    sample_index: int = 0,
) -> int:
    """H(X, Y) by explicit path-color bookkeeping (oracle for simulate_height).

    Uses the identical per-vertex coins as the fast simulator, so the two
    must agree pathwise, not just in law.  Windows capped at 16 x 16.
    """
    if X > 16 or Y > 16:
        raise WindowTooLarge("color-tracking oracle capped at 16 x 16 windows")
    mt = _mode_codes(boundary, X, Y)
    key = derive_key(seed, sample_index)
    vcol = [_RED if _boundary_bit(mt, key, "x", c) else _NONE for c in range(X)]
    blue_right = 0
    red_left_top = 0
    for y in range(1, Y + 1):
        h = _BLUE if _boundary_bit(mt, key, "y", y) else _NONE
        for c in range(X):
            vc = vcol[c]
            i1 = 1 if vc != _NONE else 0
            j1 = 1 if h != _NONE else 0
            if i1 == 1 and j1 == 1:
                # reflection: incoming vertical exits right, horizontal exits up
                vcol[c], h = h, vc
                continue
            if i1 == 0 and j1 == 0:
                continue
            u = uniform(key, (y << 21) | ((c + 1) << 1))
            if i1 == 1:
                if u >= delta1:  # turn right
                    h, vcol[c] = vc, _NONE
            else:
                if u >= delta2:  # turn up
                    vcol[c], h = h, _NONE
        if h == _BLUE:
            blue_right += 1
    red_left_top = sum(1 for vc in vcol if vc == _RED)
    return blue_right - red_left_top


def simulate_height_diagonal(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    boundary: BoundarySpec,
    seed: int,
    sample_index: int = 0,
) -> int:
    """Reference sweep in anti-diagonal order; coins keyed by site, so the
    result is pathwise identical to the row sweep."""
    if X > 64 or Y > 64:
        raise WindowTooLarge("diagonal reference capped at 64 x 64")
    mt = _mode_codes(boundary, X, Y)
    key = derive_key(seed, sample_index)
    vout: dict[tuple[int, int], int] = {}
    hout: dict[tuple[int, int], int] = {}
    for c in range(1, X + 1):
        vout[(c, 0)] = _boundary_bit(mt, key, "x", c - 1)
    for y in range(1, Y + 1):
        hout[(0, y)] = _boundary_bit(mt, key, "y", y)
    for d in range(2, X + Y + 1):
        for c in range(max(1, d - Y), min(X, d - 1) + 1):
            y = d - c
            i1 = vout[(c, y - 1)]
            j1 = hout[(c - 1, y)]
            if i1 == j1:
                i2, j2 = i1, j1
            else:
                u = uniform(key, (y << 21) | (c << 1))
                if i1 == 1:
                    i2, j2 = ((1, 0) if u < delta1 else (0, 1))
                else:
                    i2, j2 = ((0, 1) if u < delta2 else (1, 0))
            vout[(c, y)] = i2
            hout[(c, y)] = j2
    v_in = sum(vout[(c, 0)] for c in range(1, X + 1))
    h_cross = sum(hout[(X, y)] for y in range(1, Y + 1))
    return h_cross - v_in


# ---------------------------------------------------------------------------
# exact transfer-matrix engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeightDistribution:
    """Exact pmf of H(X, Y) on a finite window."""

    X: int
    Y: int
    pmf: dict[int, float]

    def total_mass(self) -> float:
        return sum(self.pmf.values())

    def q_moment(self, q: float, k: int) -> float:
        return sum(p * q ** (k * h) for h, p in self.pmf.items())

    def mean(self) -> float:
        return sum(h * p for h, p in self.pmf.items())

    def cdf(self, h: int) -> float:
        return sum(p for hh, p in self.pmf.items() if hh <= h)

    def to_json(self) -> str:
        import json

        return json.dumps(
            {"X": self.X, "Y": self.Y, "pmf": {str(h): p for h, p in sorted(self.pmf.items())}}
        )


def exact_height_distribution(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    boundary: BoundarySpec,
    measure_col: int | None = None,
) -> HeightDistribution:
    """Exact law of H(measure_col, Y), marginalized from the row-sweep DP.

    State = (vertical bit-vector, accumulated height); boundary randomness
    is folded in exactly.  measure_col defaults to X; columns right of it
    are swept too (they cannot change the result -- the light-cone test
    exercises exactly that).
    """
    mc = X if measure_col is None else measure_col
    if not 0 <= mc <= X:
        raise ValueError("measure_col must lie in [0, X]")
    if X > _DP_MAX or Y > _DP_MAX:
        raise WindowTooLarge(f"exact DP capped at {_DP_MAX} x {_DP_MAX} windows")
    boundary.check_window(X, Y)
    S = 1 << X
    nH = mc + Y + 1
    off = mc  # height index = H + mc
    P = np.zeros((S, nH))

    idx = np.arange(S)
    mask_mc = (1 << mc) - 1
    pop_mc = np.array([bin(v & mask_mc).count("1") for v in range(S)])
    if boundary.x_mode == "empty":
        P[0, off] = 1.0
    elif boundary.x_mode == "bernoulli":
        b2 = boundary.b2
        pop_all = np.array([bin(v).count("1") for v in range(S)])
        probs = b2**pop_all * (1.0 - b2) ** (X - pop_all)
        P[idx, off - pop_mc] = probs
    else:
        v0 = sum((1 << c) for c in range(X) if boundary.x_bit(c))
        P[v0, off - int(pop_mc[v0])] = 1.0

    col_set = [idx[(idx >> c) & 1 == 1] for c in range(X)]
    col_clr = [s ^ (1 << c) for s, c in zip(col_set, range(X))]
    d1, d2 = delta1, delta2

    def sweep_cols(Q: np.ndarray, lo: int, hi: int) -> None:
        for c in range(lo, hi):
            st, cl = col_set[c], col_clr[c]
            B = Q[st, 0, :].copy()  # (1,0) inputs
            C = Q[cl, 1, :].copy()  # (0,1) inputs
            Q[st, 0, :] = d1 * B + (1.0 - d2) * C
            Q[cl, 1, :] = (1.0 - d1) * B + d2 * C

    for y in range(1, Y + 1):
        Q = np.zeros((S, 2, nH))
        if boundary.y_mode == "step":
            Q[:, 1, :] = P
        elif boundary.y_mode == "bernoulli":
            Q[:, 1, :] = boundary.b1 * P
            Q[:, 0, :] = (1.0 - boundary.b1) * P
        else:
            Q[:, boundary.y_bit(y), :] = P
        sweep_cols(Q, 0, mc)
        # the horizontal bit crossing out of column mc adds one to the height
        Q[:, 1, 1:] = Q[:, 1, :-1]
        Q[:, 1, 0] = 0.0
        sweep_cols(Q, mc, X)
        P = Q[:, 0, :] + Q[:, 1, :]

    marg = P.sum(axis=0)
    pmf = {n - off: float(p) for n, p in enumerate(marg) if p > 0.0}
    return HeightDistribution(X=mc, Y=Y, pmf=pmf)


def exact_q_moment(
    delta1: float,
    delta2: float,
    X: int,
    Y: int,
    k: int,
    boundary: BoundarySpec,
) -> float:
    """E[q^{k H(X,Y)}] from the exact pmf, with q = delta1/delta2."""
    q = delta1 / delta2
    dist = exact_height_distribution(delta1, delta2, X, Y, boundary)
    return dist.q_moment(q, k)


class IdentityDomainError(ParameterDomainError):
    pass


def exact_fredholm_lhs(params: SixVertexParams, x: int, t: int, zeta: float) -> float:
    """Left side of the six-vertex Fredholm identity, evaluated exactly.

    (omega;q)_inf * sum_M omega^M/(q;q)_M * E[1/(zeta q^{H(x,t)-M}; q)_inf]
    with omega = kappa*beta2/beta1 (< 1 required) and double-sided
    (b1, b2)-Bernoulli data; the M-sum is truncated at 1e-14 relative.
    """
    q = params.q
    omega = params.kappa * params.beta2 / params.beta1
    if omega >= 1.0:
        raise IdentityDomainError(
            f"identity needs kappa*beta2 < beta1, got omega={omega}"
        )
    if zeta >= 0.0:
        raise IdentityDomainError("zeta must be negative real")
    dist = exact_height_distribution(
        params.delta1, params.delta2, x, t, BoundarySpec.double_bernoulli(params.b1, params.b2)
    )
    heights = sorted(dist.pmf)
    total = 0.0
    M = 0
    while True:
        coeff = omega**M / poch_finite(q, q, M).real
        em = sum(
            dist.pmf[h] * q_laplace_term(zeta, h - M, q).real for h in heights
        )
        term = coeff * em
        total += term
        if M > 4 and abs(term) < 1e-14 * max(abs(total), 1e-300):
            break
        M += 1
        if M > 10_000:
            raise IdentityDomainError("M-sum failed to converge")
    return poch_inf(omega, q).real * total


def weighted_height_qmoment(
    params: SixVertexParams, x: int, t: int, k: int, J: int
) -> complex:
    """Exactly enumerated weighted q-moment of H(x-1, t) (nested-integral target).

    pref * sum_{M<=J} omega^M (theta;q)_M/(q;q)_M
         * sum_A Wbar_x^(M)(A) E^(A)[q^{k(H(x-1,t)-M)}],
    where A runs over the admissible sets of occupied columns in [2, x],
    the model has Bernoulli(b1) y-entrances, and an x-entrance at (i, 0)
    iff i+1 in A.
    """
    q, kappa = params.q, params.kappa
    theta = q ** (-J)
    sp = SpecializationParams(q=q, kappa=kappa, b1=params.b1, b2=params.b2, J=J)
    omega = sp.omega
    pref = poch_inf(omega, q) / poch_inf(theta * omega, q)
    X = x - 1
    if X < 1:
        raise ValueError("need x >= 2")
    total: complex = 0.0
    cols = list(range(2, x + 1))
    for M in range(J + 1):
        coeff = omega**M * poch_finite(theta, q, M) / poch_finite(q, q, M)
        if coeff == 0:
            continue
        inner: complex = 0.0
        for bits in range(1 << len(cols)):
            A = [cols[i] for i in range(len(cols)) if (bits >> i) & 1]
            w: complex = 1.0
            counter = M
            for j in cols:
                occ = 1 if j in A else 0
                w *= weight_W(counter, occ, theta, q, params.b2)
                counter += occ
            if w == 0:
                continue
            xbits = tuple(1 if (c + 1) in A else 0 for c in range(1, X + 1))
            dist = exact_height_distribution(
                params.delta1,
                params.delta2,
                X,
                t,
                BoundarySpec(y_mode="bernoulli", x_mode="bits", b1=params.b1, x_bits=xbits),
            )
            em = dist.q_moment(q, k)
            inner += w * em * q ** (-k * M)
        total += coeff * inner
    return pref * total
