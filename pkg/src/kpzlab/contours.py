"""Discretized complex integration paths and their placement logic.

Circles use equispaced-angle trapezoid nodes (spectrally accurate for
integrands analytic in an annulus around the path); wedges and the
truncated vertical contours use Gauss-Legendre panels.  Every placed
contour records which points it must enclose/exclude and verifies the
memberships with a relative margin before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class PlacementError(ValueError):
    """No contour satisfying the stated inside/outside constraints exists."""


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Circle:
    """Positively oriented circle with trapezoid quadrature."""

    center: complex
    radius: float
    n: int = 256
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise PlacementError(f"circle radius must be positive, got {self.radius}")
        theta = 2.0 * np.pi * (np.arange(self.n) + 0.5) / self.n
        z = self.center + self.radius * np.exp(1j * theta)
        w = (2.0j * np.pi / self.n) * self.radius * np.exp(1j * theta)
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "weights", w)

    def with_n(self, n: int) -> "Circle":
        return replace(self, n=n)

    def contains(self, z: complex, margin: float = 1.0) -> bool:
        return abs(z - self.center) * margin <= self.radius

    def excludes(self, z: complex, margin: float = 1.0) -> bool:
        return abs(z - self.center) >= self.radius * margin

    def contains_circle(self, other: "Circle", margin: float = 1.0) -> bool:
        return (abs(other.center - self.center) + other.radius) * margin <= self.radius

    def scaled(self, factor: float) -> "Circle":
        return Circle(self.center * factor, self.radius * abs(factor), self.n)


@dataclass(frozen=True)
class Wedge:
    """Piecewise-linear path from vertex + L*e^{-i angle} up to vertex + L*e^{+i angle}."""

    vertex: complex
    angle: float
    length: float
    n: int = 96
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        t, wt = np.polynomial.legendre.leggauss(self.n)
        t = 0.5 * self.length * (t + 1.0)
        wt = 0.5 * self.length * wt
        down = np.exp(-1j * self.angle)
        up = np.exp(1j * self.angle)
        z = np.concatenate([self.vertex + t[::-1] * down, self.vertex + t * up])
        w = np.concatenate([-down * wt[::-1], up * wt])
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "weights", w)

    def with_n(self, n: int) -> "Wedge":
        return replace(self, n=n)


def _panel_nodes(a: complex, b: complex, n: int) -> tuple[np.ndarray, np.ndarray]:
    t, wt = np.polynomial.legendre.leggauss(n)
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    return mid + half * t, half * wt


@dataclass(frozen=True)
class DContour:
    """Truncated vertical contour with a leftward detour around the origin.

    Runs up the line Re r = R from -i*cutoff to +i*cutoff, detouring to
    Re r = delta within |Im r| <= d.  The 1/sin(pi r) factor of the kernels
    decays like 2 e^{-pi |Im r|}, so the recorded tail bound at the cutoff
    is 2 e^{-pi cutoff}.
    """

    R: float
    d: float
    delta: float
    im_cutoff: float = 14.0
    n_tail: int = 96
    n_core: int = 32
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0 < self.delta < 1 <= self.R) or not (0 < self.d < 1):
            raise PlacementError(
                f"need 0 < delta < 1 <= R and d in (0,1); got R={self.R}, d={self.d}, delta={self.delta}"
            )
        R, d, dl, cut = self.R, self.d, self.delta, self.im_cutoff
        # graded vertical panels: the integer poles of 1/sin(pi r) sit close
        # to the line Re r = R, so short panels near the real axis keep the
        # Gauss-Legendre ellipses clear of them
        breaks = [b for b in (0.3, 1.0, 3.0, 8.0) if d < b < cut]
        heights = [d] + breaks + [cut]
        n_panel = max(24, self.n_tail // max(len(heights) - 1, 1))
        segs: list[tuple[complex, complex, int]] = []
        for a, b in zip(heights[::-1][:-1], heights[::-1][1:]):
            segs.append((R - 1j * a, R - 1j * b, n_panel))
        segs += [
            (R - 1j * d, dl - 1j * d, self.n_core),
            (dl - 1j * d, dl + 1j * d, self.n_core),
            (dl + 1j * d, R + 1j * d, self.n_core),
        ]
        for a, b in zip(heights[:-1], heights[1:]):
            segs.append((R + 1j * a, R + 1j * b, n_panel))
        zs, ws = [], []
        for a, b, n in segs:
            z, w = _panel_nodes(a, b, n)
            zs.append(z)
            ws.append(w)
        object.__setattr__(self, "nodes", np.concatenate(zs))
        object.__setattr__(self, "weights", np.concatenate(ws))

    def with_n(self, n: int) -> "DContour":
        return replace(self, n_tail=n, n_core=max(16, n // 3))

    def tail_bound(self) -> float:
        return 2.0 * math.exp(-math.pi * self.im_cutoff)


Contour = Circle | Wedge | DContour


def integrate(f, c: Contour, tol: float = 1e-10, max_refine: int = 4) -> complex:
    """Quadrature of f along c, refined (node doubling) until stable to tol."""
    prev = np.sum(f(c.nodes) * c.weights)
    n = getattr(c, "n", None) or c.n_tail
    for _ in range(max_refine):
        c = c.with_n(2 * n)
        n *= 2
        cur = np.sum(f(c.nodes) * c.weights)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureError(
        f"contour integral did not stabilize to {tol}; last two values {prev}, {cur}"
    )


# ---------------------------------------------------------------------------
# placements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContourPlacement:
    """Membership constraints a placed contour was checked against."""

    inside: tuple[complex, ...]
    outside: tuple[complex, ...]
    margin: float = 1.05

    def verify(self, c: Circle) -> None:
        for z in self.inside:
            if not c.contains(z, self.margin):
                raise PlacementError(
                    f"required inside point {z} violates margin {self.margin} "
                    f"for circle(center={c.center}, r={c.radius})"
                )
        for z in self.outside:
            if not c.excludes(z, self.margin):
                raise PlacementError(
                    f"required outside point {z} violates margin {self.margin} "
                    f"for circle(center={c.center}, r={c.radius})"
                )


def _search_kernel_circles(q, inner_pts, inner_extra_c, outer_pts_g, outer_pts_c, margin):
    """Grid-search circles Gamma (v-contour) and C (w-contour) with
    Gamma inside C, q*C inside Gamma, and the stated memberships."""
    lim = min(abs(z) for z in outer_pts_g + outer_pts_c)
    best = None
    for cg in np.linspace(-0.4 * lim, 0.2 * lim, 13):
        for rg in np.linspace(0.2 * lim, 1.5 * lim, 25):
            g = dict(center=complex(cg), radius=float(rg))
            ok = all(abs(z - cg) * margin <= rg for z in inner_pts)
            ok = ok and all(abs(z - cg) >= rg * margin for z in outer_pts_g)
            if not ok:
                continue
            for cc in np.linspace(-0.6 * lim, 0.1 * lim, 13):
                for rc in np.linspace(rg, 1.8 * lim, 25):
                    ok2 = all(
                        abs(z - cc) * margin <= rc for z in inner_pts + inner_extra_c
                    )
                    ok2 = ok2 and all(abs(z - cc) >= rc * margin for z in outer_pts_c)
                    # Gamma strictly inside C, q*C strictly inside Gamma
                    ok2 = ok2 and (abs(cg - cc) + rg) * margin <= rc
                    ok2 = ok2 and (abs(q * cc - cg) + q * rc) * margin <= rg
                    if not ok2:
                        continue
                    # prefer fat margins: score by the worst slack
                    slack = min(
                        min(abs(z - cg) / rg for z in outer_pts_g),
                        min(abs(z - cc) / rc for z in outer_pts_c),
                        rc / (abs(cg - cc) + rg),
                        rg / (abs(q * cc - cg) + q * rc),
                    )
                    if best is None or slack > best[0]:
                        best = (slack, g, dict(center=complex(cc), radius=float(rc)))
    if best is None:
        raise PlacementError(
            "no feasible (Gamma, C) circle pair; constraints too tight "
            f"(inside={inner_pts}, outside_g={outer_pts_g}, outside_c={outer_pts_c})"
        )
    _, g, c = best
    return g, c


def place_contours_vertex(params, n: int = 256, margin: float = 1.05) -> tuple[Circle, Circle]:
    """Contours (Gamma_V, C_V) for the six-vertex Fredholm kernel.

    Gamma_V encloses {0, q kappa beta2} and excludes {-q kappa, q beta1};
    C_V encloses {0, -q, q kappa beta2} and Gamma_V, excludes q beta1, and
    q C_V sits strictly inside Gamma_V.  Memberships verified with margin.
    """
    q, kap, b1, b2 = params.q, params.kappa, params.beta1, params.beta2
    if kap * b2 >= b1:
        raise PlacementError(f"need kappa*beta2 < beta1, got {kap * b2} >= {b1}")
    inner = (0j, q * kap * b2 + 0j)
    g, c = _search_kernel_circles(
        q,
        inner_pts=inner,
        inner_extra_c=(-q + 0j,),
        outer_pts_g=(-q * kap + 0j, q * b1 + 0j),
        outer_pts_c=(q * b1 + 0j,),
        margin=margin,
    )
    gamma = Circle(g["center"], g["radius"], n)
    cv = Circle(c["center"], c["radius"], n)
    ContourPlacement(inside=inner, outside=(-q * kap, q * b1), margin=margin).verify(gamma)
    ContourPlacement(inside=inner + (-q,), outside=(q * b1,), margin=margin).verify(cv)
    return gamma, cv


def place_contours_asep(params, n: int = 256, margin: float = 1.05) -> tuple[Circle, Circle]:
    """Contours (Gamma_A, C_A): same geometry with kappa = 1 and -q outside Gamma_A."""
    q, b1, b2 = params.q, params.b1 / (1 - params.b1), params.b2 / (1 - params.b2)
    if b2 >= b1:
        raise PlacementError(f"need beta2 < beta1, got {b2} >= {b1}")
    inner = (0j, q * b2 + 0j)
    g, c = _search_kernel_circles(
        q,
        inner_pts=inner,
        inner_extra_c=(-q + 0j,),
        outer_pts_g=(-q + 0j, q * b1 + 0j),
        outer_pts_c=(q * b1 + 0j,),
        margin=margin,
    )
    gamma = Circle(g["center"], g["radius"], n)
    ca = Circle(c["center"], c["radius"], n)
    ContourPlacement(inside=inner, outside=(-q, q * b1), margin=margin).verify(gamma)
    ContourPlacement(inside=inner + (-q,), outside=(q * b1,), margin=margin).verify(ca)
    return gamma, ca


def place_nested_moment_contours(
    q: float, kappa: float, beta1: float, kb2: complex, k: int, n: int = 256, margin: float = 1.05
) -> tuple[Circle, list[Circle]]:
    """Contours for the k-fold nested q-moment integral in the y-variables.

    Returns (A, [B_1..B_k]): A is the circle around the pole at -q shared by
    every contour; B_i are q-nested origin-centered circles, all enclosing
    kappa*beta2, with B_k leaving q*beta1 and -kappa outside and its disk
    disjoint from the disk of q*A.
    """
    rho0 = 0.5 * q * (1.0 - q) / (1.0 + q)
    A = Circle(-q + 0j, rho0, n)
    r = abs(kb2) * margin * 1.3
    if r == 0:
        r = 1e-3 * q ** (k + 1)
    radii = [r]
    for _ in range(k - 1):
        r = r / q * margin * 1.2
        radii.append(r)
    r_max = min(q * beta1, kappa, q * q - q * rho0) / margin
    if radii[-1] > r_max:
        raise PlacementError(
            f"nested moment contours infeasible: need r_k <= {r_max:.4g}, "
            f"got {radii[-1]:.4g} (kappa*beta2 too large for k={k})"
        )
    return A, [Circle(0j, ri, n) for ri in radii]


def place_moment_base_contour(
    q: float, kappa: float, beta1: float, kb2: complex, k_max: int, n: int = 256, margin: float = 1.1
) -> Circle:
    """Single circle enclosing {0, -q, q^{1-j} kappa beta2 : j <= k_max} and its
    own q-image, excluding {-1, -kappa, q beta1}; used for the partition form."""
    need_in = [0j, -q + 0j] + [q ** (1 - j) * kb2 for j in range(1, k_max + 1)]
    need_out = [-1.0 + 0j, -kappa + 0j, q * beta1 + 0j]
    best = None
    for cc in np.linspace(-0.5, 0.1, 25):
        rin = max(abs(z - cc) for z in need_in) * margin
        rout = min(abs(z - cc) for z in need_out) / margin
        if rin <= abs(cc) * margin:
            rin = abs(cc) * margin * 1.0001  # keep 0 strictly inside
        if rin < rout:
            r = math.sqrt(rin * rout)
            slack = rout / rin
            if best is None or slack > best[0]:
                best = (slack, complex(cc), r)
    if best is None:
        raise PlacementError(
            f"no circle separates {need_in} from {need_out} (k_max={k_max} too large?)"
        )
    _, cc, r = best
    c = Circle(cc, r, n)
    ContourPlacement(inside=tuple(need_in), outside=tuple(need_out), margin=margin).verify(c)
    return c
