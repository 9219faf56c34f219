"""q-Pochhammer symbols and the q-Laplace observable term.

All identities in this package are built from (a;q)_n and (a;q)_inf with
0 < q < 1.  Infinite products are truncated once the running factor is
within 1e-16 of 1, which bounds the relative error below 1e-14 by the
geometric tail.
"""

from __future__ import annotations

import cmath
import math

_TRUNC = 1e-16
_MAX_FACTORS = 10_000


class QDomainError(ValueError):
    """Raised when a q-series argument leaves its convergence domain."""


def check_q(q: float) -> float:
    if not 0.0 < q < 1.0:
        raise QDomainError(f"q must lie strictly in (0, 1), got {q}")
    return q


def poch_finite(a: complex, q: float, n: int) -> complex:
    """Finite product (a;q)_n = prod_{j<n} (1 - a q^j); empty product is 1."""
    if n < 0:
        raise QDomainError(f"(a;q)_n needs n >= 0, got {n}")
    out = 1.0 + 0.0j
    aqj = complex(a)
    for _ in range(n):
        out *= 1.0 - aqj
        aqj *= q
    return out


def poch_inf(a: complex, q: float) -> complex:
    """Infinite product (a;q)_inf, truncated at |a q^n| < 1e-16."""
    check_q(q)
    out = 1.0 + 0.0j
    aqj = complex(a)
    for _ in range(_MAX_FACTORS):
        if abs(aqj) < _TRUNC:
            break
        out *= 1.0 - aqj
        aqj *= q
    else:  # pragma: no cover - |a| <= 1/_TRUNC always exits earlier
        raise QDomainError("(a;q)_inf did not converge within 10^4 factors")
    return out


def log_poch_inf(a: complex, q: float) -> complex:
    """log (a;q)_inf with factor-wise complex logs (no overflow for large |a|)."""
    check_q(q)
    total = 0.0 + 0.0j
    aqj = complex(a)
    for _ in range(_MAX_FACTORS):
        if abs(aqj) < _TRUNC:
            break
        f = 1.0 - aqj
        if f == 0:
            return complex("-inf")
        total += cmath.log(f)
        aqj *= q
    return total


def q_laplace_term(zeta: complex, m: int, q: float) -> complex:
    """1/(zeta q^m; q)_inf, stable for large |m| of either sign.

    For very negative m the leading factors are huge; the product is
    accumulated in the log domain so the reciprocal underflows gracefully
    to 0 instead of overflowing.
    """
    check_q(q)
    z = complex(zeta)
    if z.imag == 0.0 and z.real >= 0.0 and z.real != 0.0:
        raise QDomainError(f"zeta must avoid the nonnegative real axis, got {zeta}")
    if z == 0:
        return 1.0 + 0.0j
    if m >= 0:
        return 1.0 / poch_inf(z * q**m, q)
    # peel factors j = m..-1, then reuse the m = 0 value
    log_total = log_poch_inf(z, q)
    for j in range(m, 0):
        log_total += cmath.log(1.0 - z * q**j)
    if log_total.real > 700.0:
        return 0.0 + 0.0j
    return cmath.exp(-log_total)


def poch_inf_np(a, q: float):
    """Vectorized (a;q)_inf over a numpy array of arguments."""
    import numpy as np

    check_q(q)
    aq = np.asarray(a, dtype=complex).copy()
    out = np.ones_like(aq)
    for _ in range(_MAX_FACTORS):
        if np.max(np.abs(aq)) < _TRUNC:
            break
        out *= 1.0 - aq
        aq *= q
    return out


def q_binomial_sum(theta: complex, z: complex, q: float, tol: float = 1e-15) -> complex:
    """sum_{m>=0} z^m (theta;q)_m / (q;q)_m for |z| < 1 (q-binomial theorem LHS)."""
    check_q(q)
    if abs(z) >= 1.0:
        raise QDomainError(f"q-binomial series needs |z| < 1, got |z|={abs(z)}")
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    thqm = complex(theta)
    qm = 1.0
    for m in range(_MAX_FACTORS):
        total += term
        if m > 4 and abs(term) < tol * max(1.0, abs(total)):
            break
        qm *= q
        term *= z * (1.0 - thqm) / (1.0 - qm)
        thqm *= q
    return total


def q_factorial_inf(q: float) -> float:
    """(q;q)_inf as a real number."""
    return poch_inf(q, q).real


def math_isclose_c(a: complex, b: complex, tol: float) -> bool:
    """Absolute/relative closeness for complex values (test helper)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b)) or math.isclose(
        abs(a - b), 0.0, abs_tol=tol
    )
