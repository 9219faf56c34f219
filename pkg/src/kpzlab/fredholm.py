"""Fredholm kernels and determinants; nested q-moment integrals.

Two interchangeable kernel representations are provided and cross-checked:

* the j-summed form, with the inner integral over a star-shaped circle
  Gamma and principal logarithms.  Each j-summand carries exp(2*pi*i*j*p):
  that phase makes the summand continuous across the logarithm cut and is
  what the change of variables from the vertical-line form actually
  produces (it is invisible for integer p).
* the vertical-line ("D-contour") form in the Mellin-Barnes variable r,
  which has no branch ambiguity and is used as the oracle.  It requires
  every Pochhammer zero of g to sit inside radius q^R * inf|w|, i.e. small
  boundary density b2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .contours import Circle, DContour, place_nested_moment_contours
from .params import ASEPParams, SixVertexParams
from .qseries import poch_finite

_TWO_PI_I = 2j * np.pi


# ---------------------------------------------------------------------------
# kernel symbol g and its one-step ratio f(z) = g(z)/g(qz)
# ---------------------------------------------------------------------------


def _log_poch_inf_np(a, q: float):
    """Vectorized log (a;q)_inf as a sum of principal factor logs."""
    aq = np.asarray(a, dtype=complex).copy()
    out = np.zeros_like(aq)
    while np.max(np.abs(aq)) >= 1e-16:
        out += np.log(1.0 - aq)
        aq *= q
    return out


def log_g_vertex(z, params: SixVertexParams, x: int, t: int, theta: complex = 0.0):
    """log of the six-vertex kernel symbol g_V(z; x, t).

    g_V has poles at -q and q^{1-j} beta1 and zeros at -q kappa and
    q^{j+1} kappa beta2; exponentiating the factor-wise principal logs
    reproduces g_V exactly for integer x, t while staying finite for the
    huge lattice sizes of the ASEP degeneration.
    """
    q, kap, b1, b2 = params.q, params.kappa, params.beta1, params.beta2
    z = np.asarray(z, dtype=complex)
    out = x * np.log(z / kap + q) - t * np.log(z + q)
    out += _log_poch_inf_np(q * b2 * kap / z, q)
    out -= _log_poch_inf_np(z / (q * b1), q)
    if theta != 0.0:
        out -= _log_poch_inf_np(theta * q * b2 * kap / z, q)
    return out


def log_g_asep(z, params: ASEPParams, x: int, T: float):
    """log of the ASEP kernel symbol (kappa -> 1 degeneration, exponential clock factor)."""
    q = params.q
    b1 = params.b1 / (1.0 - params.b1)
    b2 = params.b2 / (1.0 - params.b2)
    z = np.asarray(z, dtype=complex)
    out = x * np.log(z + q) + T * q * (params.R - params.L) / (z + q)
    out += _log_poch_inf_np(q * b2 / z, q) - _log_poch_inf_np(z / (q * b1), q)
    return out


def g_vertex(z, params: SixVertexParams, x: int, t: int, theta: complex = 0.0):
    return np.exp(log_g_vertex(z, params, x, t, theta))


def g_asep(z, params: ASEPParams, x: int, T: float):
    return np.exp(log_g_asep(z, params, x, T))


def f_vertex_moment(z, params: SixVertexParams, x_power: int, t: int, theta: complex):
    """Ratio symbol for the q-moment integrands, with explicit column power."""
    q, kap = params.q, params.kappa
    kb2 = kap * params.beta2
    z = np.asarray(z, dtype=complex)
    out = ((1.0 + z) / (1.0 + z / q)) ** t
    out *= ((1.0 + z / (q * kap)) / (1.0 + z / kap)) ** x_power
    out /= 1.0 - z / (q * params.beta1)
    out *= (1.0 - theta * kb2 / z) / (1.0 - kb2 / z)
    return out


# ---------------------------------------------------------------------------
# j-summed kernels on (C, Gamma)
# ---------------------------------------------------------------------------


def _inv_sin_safe(z: np.ndarray) -> np.ndarray:
    """1/sin(z) without overflow for large |Im z| (decays like 2 e^{-|Im z|})."""
    out = np.empty_like(z)
    big = np.abs(z.imag) > 30.0
    small = ~big
    out[small] = 1.0 / np.sin(z[small])
    zb = z[big]
    s = np.sign(zb.imag)
    out[big] = 2j * s * np.exp(1j * s * zb)
    return out


class KernelError(ArithmeticError):
    pass


def kernel_jsum_matrix(
    log_gfun,
    p_exp: float,
    cw: Circle,
    gamma: Circle,
    q: float,
    j_cap: int = 30,
    tol: float = 1e-15,
) -> np.ndarray:
    """Matrix of the j-summed kernel at all (w, w') node pairs of cw.

    K(w, w') = 1/(2i log q) * sum_j exp(2 pi i j p) *
               oint_Gamma v^{p-1} w^{-p} g(w)/g(v)
                          / [ sin(pi/log q (Log v - Log w + 2 pi i j)) (w'-v) ] dv
    """
    w = cw.nodes
    v = gamma.nodes
    uv = gamma.weights
    lgw = log_gfun(w)
    lgv = log_gfun(v)
    logw = np.log(w)
    logv = np.log(v)
    lq = math.log(q)
    # T[a, b] = sum_j phase_j * v_a^{p-1} w_b^{-p} g(w_b)/g(v_a) / sin(...)
    base = np.exp(
        (p_exp - 1.0) * logv[:, None]
        - p_exp * logw[None, :]
        + lgw[None, :]
        - lgv[:, None]
    )
    dlog = (logv[:, None] - logw[None, :]) / lq
    T = np.zeros_like(base)
    order = [0] + [s * j for j in range(1, j_cap + 1) for s in (1, -1)]
    ref = None
    for j in order:
        phase = cmath.exp(_TWO_PI_I * j * p_exp)
        term = phase * base * _inv_sin_safe(np.pi * (dlog + _TWO_PI_I * j / lq))
        T += term
        mag = np.max(np.abs(term))
        if ref is None:
            ref = max(mag, 1e-300)
        elif j < 0 and mag < tol * ref:
            break
    else:
        raise KernelError(f"kernel j-sum did not converge within |j| <= {j_cap}")
    # integrate against 1/(w' - v)
    D = 1.0 / (w[None, :] - v[:, None])  # (a, c) = 1/(w'_c - v_a)
    K = (T * uv[:, None]).T @ D / (2j * lq)
    return K


def kernel_V_matrix(
    params: SixVertexParams, x: int, t: int, p_exp: float, cw: Circle, gamma: Circle
) -> np.ndarray:
    return kernel_jsum_matrix(
        lambda z: log_g_vertex(z, params, x, t), p_exp, cw, gamma, params.q
    )


def kernel_A_matrix(
    params: ASEPParams, x: int, T: float, p_exp: float, cw: Circle, gamma: Circle
) -> np.ndarray:
    return kernel_jsum_matrix(
        lambda z: log_g_asep(z, params, x, T), p_exp, cw, gamma, params.q
    )


# ---------------------------------------------------------------------------
# vertical-line (Mellin-Barnes) kernel
# ---------------------------------------------------------------------------


def kernel_dcontour_matrix(
    log_gfun, zeta: complex, q: float, cw: Circle, dc: DContour, chunk: int = 64
) -> np.ndarray:
    """Matrix of K_zeta(w, w') = (1/2i) int_D g(w)/g(q^r w) (-zeta)^r
    / [sin(pi r) (q^r w - w')] dr at the nodes of cw."""
    zeta = complex(zeta)
    if zeta.imag == 0.0 and zeta.real >= 0.0:
        raise KernelError("zeta must avoid the nonnegative real axis")
    w = cw.nodes
    n = len(w)
    lgw = log_gfun(w)
    log_mz = cmath.log(-zeta)
    r = dc.nodes
    wr = dc.weights
    K = np.zeros((n, n), dtype=complex)
    pref = wr * np.exp(r * log_mz) / np.sin(np.pi * r) / 2j
    for lo in range(0, len(r), chunk):
        rj = r[lo : lo + chunk]
        pj = pref[lo : lo + chunk]
        qrw = np.exp(rj[None, :] * math.log(q)) * w[:, None]  # (n, chunk)
        grat = np.exp(lgw[:, None] - log_gfun(qrw.ravel()).reshape(n, len(rj)))
        A = pj[None, :] * grat  # (n_w, chunk)
        denom = qrw[:, :, None] - w[None, None, :]  # (n_w, chunk, n_w')
        K += np.einsum("bc,bca->ba", A, 1.0 / denom)
    return K


def dcontour_feasible(q: float, kb2: complex, cw: Circle, R: float) -> bool:
    """All Pochhammer zeros q^{j+1} kappa beta2 must sit below radius q^R inf|w|."""
    inf_w = cw.radius - abs(cw.center)
    return abs(q * kb2) < q**R * inf_w


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def _scaled_matrix(K: np.ndarray, contour: Circle) -> np.ndarray:
    return (contour.weights / _TWO_PI_I)[:, None] * K


def fredholm_det_nystrom(K: np.ndarray, contour: Circle) -> complex:
    """det(Id + K) by direct determinant of the quadrature discretization."""
    M = _scaled_matrix(K, contour)
    return complex(np.linalg.det(np.eye(len(M)) + M))


class SeriesDivergence(ArithmeticError):
    pass


def fredholm_det_series(
    K: np.ndarray, contour: Circle, k_max: int = 12, tol: float = 1e-12
) -> complex:
    """det(Id + K) by the minor-sum series: 1 + sum_k e_k(discretized K).

    e_k are elementary symmetric functions of the discretized spectrum
    (equal to the k-fold minor integrals of the quadrature rule); the sum
    is truncated when the term drops below tol relative, with a loud error
    if terms fail to decay by k_max.
    """
    M = _scaled_matrix(K, contour)
    mu = np.linalg.eigvals(M)
    total = 1.0 + 0j
    e = np.zeros(k_max + 1, dtype=complex)
    e[0] = 1.0
    p = np.array([np.sum(mu**i) for i in range(1, k_max + 1)])
    last = math.inf
    for k in range(1, k_max + 1):
        ek = sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1)) / k
        e[k] = ek
        total += ek
        term = abs(ek)
        if term < tol * max(1.0, abs(total)):
            return complex(total)
        if k > 3 and term > 10.0 * last:
            raise SeriesDivergence(f"series terms grow at k={k}: |e_k|={term:.3g}")
        last = term
    if abs(e[k_max]) > 1e-6 * max(1.0, abs(total)):
        raise SeriesDivergence(
            f"series not converged by k_max={k_max}: last term {abs(e[k_max]):.3g}"
        )
    return complex(total)


# ---------------------------------------------------------------------------
# nested q-moment integrals
# ---------------------------------------------------------------------------


def q_moment_integral(
    params: SixVertexParams, x: int, t: int, k: int, J: int, n: int = 256
) -> complex:
    """k-fold nested contour integral for the weighted q-moment of H(x-1, t).

    Each variable runs over the union of a circle around the pole at -q and
    an origin-centered circle enclosing kappa*beta2; the origin circles are
    q-nested.  Valid for kappa*beta2 small (placement is loud otherwise).
    """
    if k == 0:
        return 1.0
    if k > 3:
        raise ValueError("nested evaluation supported for k <= 3")
    q, kap = params.q, params.kappa
    theta = q ** (-J)
    kb2 = kap * params.beta2
    A, Bs = place_nested_moment_contours(q, kap, params.beta1, kb2, k, n)
    phi = lambda y: f_vertex_moment(y, params, x - 1, t, theta) / y

    comps = [(np.concatenate([A.nodes, B.nodes]), np.concatenate([A.weights, B.weights]))
             for B in Bs]
    pref = q ** (k * (k - 1) // 2) / (2j * np.pi) ** k
    if k == 1:
        y, u = comps[0]
        return complex(pref * np.sum(phi(y) * u))
    if k == 2:
        y1, u1 = comps[0]
        y2, u2 = comps[1]
        f1 = phi(y1) * u1
        f2 = phi(y2) * u2
        cross = (y1[:, None] - y2[None, :]) / (y1[:, None] - q * y2[None, :])
        return complex(pref * (f1 @ cross @ f2))
    y1, u1 = comps[0]
    y2, u2 = comps[1]
    y3, u3 = comps[2]
    f1 = phi(y1) * u1
    f2 = phi(y2) * u2
    f3 = phi(y3) * u3
    c12 = (y1[:, None] - y2[None, :]) / (y1[:, None] - q * y2[None, :])
    c13 = (y1[:, None] - y3[None, :]) / (y1[:, None] - q * y3[None, :])
    c23 = (y2[:, None] - y3[None, :]) / (y2[:, None] - q * y3[None, :])
    total = np.einsum("a,b,c,ab,ac,bc->", f1, f2, f3, c12, c13, c23)
    return complex(pref * total)


# ---------------------------------------------------------------------------
# partition (single-contour) form of the moments and the generating series
# ---------------------------------------------------------------------------


def _partitions(k: int):
    def rec(rest: int, cap: int, prefix: tuple):
        if rest == 0:
            yield prefix
            return
        for p in range(min(rest, cap), 0, -1):
            yield from rec(rest - p, p, prefix + (p,))

    yield from rec(k, k, ())


def moment_via_partitions(f, c: Circle, k: int, q: float) -> complex:
    """Moment m_k as the partition sum of determinant integrals over c.

    Integrals are evaluated by expanding the Cauchy-type determinant over
    permutations and factorizing cycles into traces of node-matrix
    products; cost is polynomial in the node count.
    """
    if k == 0:
        return 1.0
    if k > 6:
        raise ValueError("partition evaluation supported for k <= 6")
    z = c.nodes
    u = c.weights / _TWO_PI_I
    fz = f(z)
    # f-tilde products and per-part-value matrices
    distinct = range(1, k + 1)
    ftil: dict[int, np.ndarray] = {}
    acc = np.ones_like(z)
    for v in distinct:
        acc = acc * f(q ** (v - 1) * z) if v > 1 else fz.copy()
        ftil[v] = acc.copy()
    B = {v: 1.0 / (z[:, None] - q**v * z[None, :]) for v in distinct}
    H = {(a, b): (u * ftil[a])[:, None] * B[b] for a in distinct for b in distinct}

    qq_k = poch_finite(q, q, k).real
    total = 0.0 + 0j
    for lam in _partitions(k):
        ell = len(lam)
        mults: dict[int, int] = {}
        for p in lam:
            mults[p] = mults.get(p, 0) + 1
        mfact = 1.0
        for m in mults.values():
            mfact *= math.factorial(m)
        trace_cache: dict[tuple, complex] = {}

        def cycle_trace(cyc: tuple[int, ...]) -> complex:
            vals = tuple(lam[i] for i in cyc)
            rots = [vals[i:] + vals[:i] for i in range(len(vals))]
            key = min(rots)
            if key not in trace_cache:
                M = H[(key[0], key[1 % len(key)])]
                for i in range(1, len(key)):
                    M = M @ H[(key[i], key[(i + 1) % len(key)])]
                trace_cache[key] = complex(np.trace(M))
            return trace_cache[key]

        part_total = 0.0 + 0j
        for sigma in permutations(range(ell)):
            seen = [False] * ell
            sgn = 1
            prod = 1.0 + 0j
            for start in range(ell):
                if seen[start]:
                    continue
                cyc = [start]
                seen[start] = True
                nxt = sigma[start]
                while nxt != start:
                    cyc.append(nxt)
                    seen[nxt] = True
                    nxt = sigma[nxt]
                if len(cyc) % 2 == 0:
                    sgn = -sgn
                prod *= cycle_trace(tuple(cyc))
            part_total += sgn * prod
        total += part_total / mfact
    return complex(qq_k * total)


def estimate_series_radius(f, c: Circle, q: float, n_powers: int = 60) -> float:
    """Empirical bound |zeta| < 1/(B (1-q)) with B from kernel samples."""
    z = c.nodes
    B = 0.0
    for nn in range(n_powers):
        B = max(B, float(np.max(np.abs(f(q**nn * z)))))
        if q**nn * np.max(np.abs(z)) < 1e-12:
            break
    gap = np.abs(q * z[:, None] - z[None, :]).min()
    B = max(B, 1.0 / gap)
    return 1.0 / (B * (1.0 - q))


@dataclass(frozen=True)
class GeneratingSeriesResult:
    lhs: complex
    rhs: complex
    terms: list[complex]
    radius: float

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


def generating_series_check(
    log_gfun,
    c: Circle,
    dc: DContour,
    zeta: complex,
    q: float,
    k_max: int = 6,
) -> GeneratingSeriesResult:
    """Both sides of the moment generating-series identity.

    lhs = sum_k m_k zeta^k/(q;q)_k with m_k from the partition form;
    rhs = det(Id + K_zeta) with the vertical-line kernel.  The zeta radius
    is estimated from kernel samples and enforced.
    """
    f = lambda z: np.exp(log_gfun(z) - log_gfun(q * np.asarray(z, dtype=complex)))
    radius = estimate_series_radius(f, c, q)
    if abs(zeta) >= radius:
        raise ValueError(f"|zeta|={abs(zeta):.3g} outside estimated radius {radius:.3g}")
    terms = []
    lhs = 0.0 + 0j
    for k in range(k_max + 1):
        mk = moment_via_partitions(f, c, k, q) if k else 1.0
        term = mk * zeta**k / poch_finite(q, q, k)
        terms.append(complex(term))
        lhs += term
    K = kernel_dcontour_matrix(log_gfun, zeta, q, c, dc)
    rhs = fredholm_det_nystrom(K, c)
    return GeneratingSeriesResult(lhs=complex(lhs), rhs=rhs, terms=terms, radius=radius)
