"""Boundary weights for the double-sided six-vertex model.

Single-row vertex weights W / W_hat, their signature products (script W and
the shifted companion), the explicit product formulas for the principal
specializations of the symmetric functions F and G, and a brute-force path
enumerator that serves as the independent oracle for F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .qseries import poch_finite, poch_inf
from .signatures import Signature, distinct_support_signatures


class WeightDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SpecializationParams:
    """Parameters of the boundary measure: (q, kappa, b1, b2) plus theta.

    When J is given, theta is pinned to q^{-J} exactly (the principal case);
    otherwise theta may be any complex number (theta = 0 recovers plain
    Bernoulli weighting).  b2 may be complex: the measure analytically
    continues in b2, and the convergent-positivity regime is b2 < 0.
    """

    q: float
    kappa: float
    b1: float
    b2: complex
    theta: complex = 0.0
    J: int | None = None
    beta1: float = field(init=False)
    beta2: complex = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.q < 1.0:
            raise WeightDomainError(f"need q in (0,1), got {self.q}")
        if self.J is not None:
            if self.J < 1:
                raise WeightDomainError(f"need J >= 1, got {self.J}")
            theta = self.q ** (-self.J)
            object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "beta1", self.b1 / (1.0 - self.b1))
        object.__setattr__(self, "beta2", self.b2 / (1.0 - self.b2))

    @property
    def omega(self) -> complex:
        """kappa * beta2 / beta1, the geometric weight of the corner column."""
        return self.kappa * self.beta2 / self.beta1


def weight_W(j: int, i: int, theta: complex, q: float, b2: complex) -> complex:
    """Single-site weight: occupation i in {0,1} after j earlier particles."""
    if i == 0:
        return 1.0 - b2 + q**j * theta * b2
    if i == 1:
        return b2 - q**j * theta * b2
    return 0.0


def weight_W_hat(m: int, p: SpecializationParams) -> complex:
    """Corner-column weight of m particles at position 1 (q-binomial type)."""
    if m < 0:
        return 0.0
    pref = poch_inf(p.omega, p.q) / poch_inf(p.theta * p.omega, p.q)
    return pref * p.omega**m * poch_finite(p.theta, p.q, m) / poch_finite(p.q, p.q, m)


def weight_script_W(lam: Signature, x: int, p: SpecializationParams) -> complex:
    """Product weight of a full boundary signature on columns [1, x].

    Zero unless all parts are in [1, x]; the corner column gets W_hat and
    each column j in [2, x] gets W with the running particle counter.
    """
    if lam.m(0) > 0 or lam.max_part() > x:
        return 0.0
    out = weight_W_hat(lam.m(1), p)
    counter = lam.m(1)
    for j in range(2, x + 1):
        mj = lam.m(j)
        out *= weight_W(counter, mj, p.theta, p.q, p.b2)
        counter += mj
    return out


def weight_W_bar(lam: Signature, x: int, M: int, p: SpecializationParams) -> complex:
    """Companion weight: corner column dropped, counters shifted by M."""
    if M < 0:
        raise WeightDomainError(f"need M >= 0, got {M}")
    if lam.m(0) > 0 or lam.max_part() > x:
        return 0.0
    out: complex = 1.0
    counter = M
    for j in range(2, x + 1):
        mj = lam.m(j)
        out *= weight_W(counter, mj, p.theta, p.q, p.b2)
        counter += mj
    return out


class SingularityError(ZeroDivisionError):
    pass


def F_principal(
    lam: Signature,
    u: complex,
    xi_seq: Sequence[complex],
    s_seq: Sequence[complex],
    q: float,
) -> complex:
    """Principal specialization F_lambda(u, qu, ..., q^{J-1}u) in product form.

    lam must have length J; xi_seq and s_seq are the column parameter
    sequences (index 0 = leftmost column).
    """
    J = lam.length
    out = poch_finite(q, q, J)
    for k in range(1, J + 1):
        lk = lam.parts[k - 1]
        uk = q ** (k - 1) * u
        denom = 1.0 - s_seq[lk] * xi_seq[lk] * uk
        if denom == 0:
            raise SingularityError(f"pole in F at part {lk}, row factor {k}")
        out /= denom
        for h in range(lk):
            d = 1.0 - s_seq[h] * xi_seq[h] * uk
            if d == 0:
                raise SingularityError(f"pole in F at column {h}, row factor {k}")
            out *= (xi_seq[h] * uk - s_seq[h]) / d
    return out


def G_principal(lam: Signature, s_seq: Sequence[complex], q: float) -> complex:
    """Limit specialization of the conjugated G function in product form."""
    n = lam.length
    if n == 0:
        return 1.0
    if lam.parts[-1] == 0:
        return 0.0
    s0 = s_seq[0]
    out = poch_finite(s0 * s0, q, n) * (-s0) ** (-n)
    for i in range(1, lam.max_part() + 1):
        ei = lam.e(i)
        if ei:
            out *= (-s_seq[i]) ** ei
    return out


def msa0_weight(lam: Signature, p: SpecializationParams) -> complex:
    """Unnormalized boundary measure value on a length-J signature.

    Vanishes when the smallest part is 0 or any value above 1 repeats.
    """
    if p.J is None:
        raise WeightDomainError("msa0_weight needs the principal case theta = q^{-J}")
    J = p.J
    if lam.length != J:
        return 0.0
    if lam.parts and lam.parts[-1] == 0:
        return 0.0
    for v in set(lam.parts):
        if v > 1 and lam.m(v) > 1:
            return 0.0
    q, theta, b2 = p.q, p.theta, p.b2
    m = lam.m(1)
    out = p.omega**m * poch_finite(theta, q, m) / poch_finite(q, q, m)
    parts = lam.parts + (0,)  # lambda_{J+1} = 0
    for k in range(J - m):
        idx = J - m - k  # 1-based index of the k-th smallest part above 1
        lam_k = parts[idx - 1]
        lower = max(parts[idx], 1)
        base0 = b2 - q ** (k + m) * theta * b2
        base1 = 1.0 - b2 + q ** (k + m) * theta * b2
        out *= base0 * base1 ** (lam_k - lower - 1)
    return out


def ms_normalizer_by_summation(p: SpecializationParams, tol: float = 1e-13) -> complex:
    """Total mass of the unnormalized measure by direct enumeration.

    Convergent when every gap-decay base |1 + b2 (q^{j-J} - 1)| is below 1;
    used as the oracle for the closed normalizer below.  Cost grows like
    cap^J, so this is only practical in comfortably decaying regimes.
    """
    if p.J is None:
        raise WeightDomainError("normalization needs the principal case")
    J = p.J
    bases = [abs(1.0 + p.b2 * (p.q ** (j - J) - 1.0)) for j in range(J)]
    worst = max(bases)
    if worst >= 1.0:
        raise WeightDomainError(
            f"summation normalizer divergent: slowest gap decay {worst:.4f}"
        )
    cap = max(40, int(math.log(tol) / math.log(worst)) + 4 * J)
    max_cap = {1: 20000, 2: 2200, 3: 280}.get(J, 120)
    if cap > max_cap:
        raise WeightDomainError(
            f"summation normalizer impractical: needs {cap} columns at J={J} "
            f"(slowest gap decay {worst:.4f})"
        )
    total = sum(msa0_weight(lam, p) for lam in distinct_support_signatures(J, cap))
    return total


def ms_weight(lam: Signature, x: int, p: SpecializationParams) -> complex:
    """Normalized boundary measure value; matches weight_script_W for x > lambda_1.

    The normalizer is the total mass of the unnormalized measure over its
    full support.  Because the column weights at each site sum to one, that
    total telescopes to (theta*omega;q)_inf / (omega;q)_inf exactly, which
    is what is used here; ms_normalizer_by_summation recomputes it by brute
    enumeration in decaying regimes as the oracle.
    """
    if p.J is None:
        raise WeightDomainError("ms_weight needs the principal case theta = q^{-J}")
    if lam.max_part() > x:
        return 0.0
    Z = poch_inf(p.theta * p.omega, p.q) / poch_inf(p.omega, p.q)
    return msa0_weight(lam, p) / Z


# ---------------------------------------------------------------------------
# brute-force path enumeration (oracle for F_principal)
# ---------------------------------------------------------------------------


def _vertex_w(
    i1: int, j1: int, i2: int, j2: int, u: complex, xi: complex, s: complex, q: float
) -> complex:
    """Weight table of the inhomogeneous vertex model (horizontal spin 1/2)."""
    denom = 1.0 - s * xi * u
    if denom == 0:
        raise SingularityError("vertex weight pole: s*xi*u = 1")
    if j1 == 0 and j2 == 0 and i2 == i1:
        return (1.0 - q**i1 * s * xi * u) / denom
    if j1 == 0 and j2 == 1 and i2 == i1 - 1:
        return (1.0 - q ** (i1 - 1) * s * s) * xi * u / denom
    if j1 == 1 and j2 == 0 and i2 == i1 + 1:
        return (1.0 - q ** (i1 + 1)) / denom
    if j1 == 1 and j2 == 1 and i2 == i1:
        return (xi * u - q**i1 * s) / denom
    return 0.0


_BRUTE_CAP = (4, 2, 2)  # max lambda_1, max N, max M


def brute_force_F(
    lam: Signature,
    mu: Signature,
    u_list: Sequence[complex],
    xi_seq: Sequence[complex],
    s_seq: Sequence[complex],
    q: float,
) -> complex:
    """Sum of weighted path ensembles defining F_{lambda/mu}(u_1..u_N).

    Enumerates every up-right ensemble in the strip [0, lambda_1] x [1, N]
    with one left entry per row, bottom entries at mu, and top exits at
    lambda.  Exponential in the grid size; guarded by hard caps.
    """
    N = len(u_list)
    M = mu.length
    if lam.length != M + N:
        raise WeightDomainError(f"need len(lambda) = len(mu) + len(u), got {lam.length}")
    lam1 = lam.max_part()
    if lam1 > _BRUTE_CAP[0] or N > _BRUTE_CAP[1] or M > _BRUTE_CAP[2]:
        raise WeightDomainError(f"brute-force enumeration capped at (lam1,N,M) <= {_BRUTE_CAP}")
    if mu.max_part() > lam1:
        return 0.0
    ncols = lam1 + 1  # columns 0..lambda_1
    bottom = [mu.m(x) for x in range(ncols)]
    top = [lam.m(x) for x in range(ncols)]

    total = [0.0 + 0.0j]

    def sweep_row(y: int, vin: list[int]) -> None:
        # enumerate one row: horizontal input 1 at column 0, must exit with j = 0
        def col(x: int, h: int, vout: list[int], w: complex) -> None:
            if w == 0:
                return
            if x == ncols:
                if h == 0:
                    finish_row(y, vout, w)
                return
            i1 = vin[x]
            moves: list[tuple[int, int]] = []
            if h == 0:
                moves.append((i1, 0))
                if i1 >= 1:
                    moves.append((i1 - 1, 1))
            else:
                moves.append((i1 + 1, 0))
                moves.append((i1, 1))
            for i2, j2 in moves:
                wxy = _vertex_w(i1, h, i2, j2, u_list[y - 1], xi_seq[x], s_seq[x], q)
                if wxy != 0:
                    vout.append(i2)
                    col(x + 1, j2, vout, w * wxy)
                    vout.pop()

        def finish_row(y: int, vout: list[int], w: complex) -> None:
            stack.append(w)
            if y == N:
                if vout == top:
                    total[0] += prod_stack()
            else:
                sweep_row(y + 1, list(vout))
            stack.pop()

        col(0, 1, [], 1.0 + 0.0j)

    stack: list[complex] = []

    def prod_stack() -> complex:
        out = 1.0 + 0.0j
        for w in stack:
            out *= w
        return out

    sweep_row(1, bottom)
    return total[0]
