import math

import numpy as np
import pytest

from kpzlab.airy import (
    AiryGrid,
    AiryRangeError,
    airy,
    airy_kernel,
    airy_kernel_contour,
    airy_kernel_matrix,
    airy_np,
    baik_rains_cdf,
    baik_rains_components,
    g_of_cs,
    tw_like_det,
)


def maclaurin_oracle(x: float, terms: int = 50) -> float:
    """Independent 50-term series evaluation (compensated summation)."""
    AI0 = 0.3550280538878172392600631860
    DAI0 = -0.2588194037928067984051835602
    fterms, gterms = [1.0], [x]
    tf, tg = 1.0, x
    for k in range(terms):
        tf = tf * x**3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x**3 / ((3 * k + 3) * (3 * k + 4))
        fterms.append(tf)
        gterms.append(tg)
    return AI0 * math.fsum(fterms) + DAI0 * math.fsum(gterms)


class TestAiryFunction:
    def test_value_at_zero(self):
        assert airy(0.0) == pytest.approx(0.3550280538878172, abs=1e-14)
        assert airy(0.0) == pytest.approx(maclaurin_oracle(0.0), abs=1e-14)

    def test_against_series_oracle(self):
        for x in np.linspace(-6.0, 5.0, 45):
            assert abs(airy(float(x)) - maclaurin_oracle(float(x))) < 1e-12

    def test_against_mpmath_full_range(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 25
        xs = np.concatenate([np.linspace(-40, 40, 161), [-8.6, -5.4, 3.5, 6.5, -7.9, 5.9]])
        for x in xs:
            assert abs(airy(float(x)) - float(mp.airyai(float(x)))) < 1e-12

    def test_ode_by_finite_differences(self):
        h = 5e-4
        for x in np.linspace(-4.9, 4.9, 20):
            d2 = (airy(x + h) - 2 * airy(x) + airy(x - h)) / h**2
            assert abs(d2 - x * airy(x)) < 1e-6

    def test_positive_decreasing_on_right_axis(self):
        xs = np.linspace(0, 12, 60)
        vals = airy_np(xs)
        assert np.all(vals > 0)
        assert np.all(np.diff(vals) < 0)

    def test_range_guard(self):
        with pytest.raises(AiryRangeError):
            airy(45.0)


class TestAiryKernel:
    def test_symmetry(self):
        for (x, y) in [(0.3, -1.2), (2.0, 0.1), (-2.5, -0.4)]:
            assert airy_kernel(x, y) == pytest.approx(airy_kernel(y, x), abs=1e-14)

    def test_decay(self):
        assert airy_kernel(15.0, 0.0) < 1e-10

    def test_diagonal_christoffel_darboux(self):
        # int_0^inf Ai(x+l)^2 dl = Ai'(x)^2 - x Ai(x)^2
        mp = pytest.importorskip("mpmath")
        for x in (-1.0, 0.0, 1.5):
            expected = float(mp.airyai(x, 1) ** 2 - x * mp.airyai(x) ** 2)
            assert airy_kernel(x, x) == pytest.approx(expected, abs=1e-11)

    def test_contour_dual_representation(self):
        pts = [(-2.0, 0.5), (0.0, 0.0), (1.0, 2.0), (-1.5, -1.5), (3.0, 0.0),
               (0.3, -2.2), (-3.0, 1.0), (2.5, 2.5), (-1.0, 3.0), (0.8, 0.1)]
        for x, y in pts:
            kc = airy_kernel_contour(x, y)
            assert abs(airy_kernel(x, y) - kc) < 1e-8
            assert abs(kc.imag) < 1e-10

    def test_matrix_consistent_with_pairwise(self):
        pts = np.array([0.0, 0.7, 2.1])
        K = airy_kernel_matrix(pts)
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                assert K[i, j] == pytest.approx(airy_kernel(float(x), float(y)), abs=1e-12)


class TestShiftedDeterminant:
    def test_large_s_limit(self):
        assert abs(tw_like_det(0.0, 10.0) - 1.0) < 1e-8

    def test_independent_coarse_discretization(self):
        # same operator, different quadrature family (composite midpoint) and cutoff
        d_main = tw_like_det(0.0, 0.0)
        M, n = 16.0, 1600
        t = (np.arange(n) + 0.5) / n
        nodes, weights = t * M, np.full(n, M / n)
        K = airy_kernel_matrix(nodes)
        sign, logdet = np.linalg.slogdet(np.eye(n) - K * weights[None, :])
        assert abs(d_main - sign * np.exp(logdet)) < 1e-6

    def test_monotone_in_s(self):
        vals = [tw_like_det(0.0, s) for s in np.linspace(-6.0, 4.0, 50)]
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))

    def test_domain_guard(self):
        with pytest.raises(AiryRangeError):
            tw_like_det(0.0, -9.0)


class TestBaikRainsComponents:
    def test_R_against_2d_quadrature_at_c0(self):
        # R(0, s) = s + int_s^inf int_0^inf Ai(x+y) dy dx by raw tensor quadrature
        for s in (-1.0, 0.0, 1.3):
            comp = baik_rains_components(0.0, s)
            t, w = np.polynomial.legendre.leggauss(220)
            L = 18.0
            x = s + (t + 1) * L / 2
            wx = w * L / 2
            y = (t + 1) * L / 2
            inner = airy_np(x[:, None] + y[None, :]) @ wx
            direct = s + float(wx @ inner)
            assert abs(comp.R - direct) < 1e-8

    def test_Psi_at_c0(self):
        s = 0.4
        comp = baik_rains_components(0.0, s)
        g = comp.grid
        for i in (0, 20, 64):
            y = g.nodes[i]
            lam, wl = np.polynomial.legendre.leggauss(240)
            L = 16.0
            ll = (lam + 1) * L / 2
            direct = 1.0 - float((wl * L / 2) @ airy_np(y + s + ll))
            assert abs(comp.Psi[i] - direct) < 1e-9

    def test_Phi_tail_decay(self):
        comp = baik_rains_components(0.0, 0.0)
        tail = comp.grid.nodes >= 20.0
        assert np.max(np.abs(comp.Phi[tail])) < 1e-8

    def test_g_reduces_to_R_at_large_s(self):
        comp = baik_rains_components(0.0, 10.0)
        assert abs(g_of_cs(0.0, 10.0) - comp.R) < 1e-8

    def test_g_grid_doubling(self):
        g0 = g_of_cs(0.0, 0.0)
        g1 = g_of_cs(0.0, 0.0, AiryGrid.build(0.0, 0.0).doubled())
        assert abs(g0 - g1) < 1e-8


class TestBaikRainsCdf:
    def test_limits(self):
        assert abs(baik_rains_cdf(0.0, -6.0)) < 1e-3
        assert abs(baik_rains_cdf(0.0, 6.0) - 1.0) < 1e-3

    def test_range(self):
        for s in np.linspace(-6, 5, 23):
            v = baik_rains_cdf(0.0, float(s))
            assert -5e-3 <= v <= 1.0 + 5e-3

    def test_known_moments(self):
        """Mean/variance/skewness of the distribution against published values.

        Baik-Rains c=0 moments: mean 0, variance 1.15039, skewness 0.35941.
        Moments are taken from the CDF by integration by parts, which avoids
        the differencing bias of a density estimate.
        """
        lo, hi, h = -7.75, 8.0, 0.125  # stencil at lo needs lo - 2h >= -8
        s = np.arange(lo, hi + h / 2, h)
        g = AiryGrid.build(lo, 0.0)
        F = np.clip([baik_rains_cdf(0.0, float(v), grid=g) for v in s], 0, 1)
        def simpson(y):
            # 126 intervals (even), composite Simpson
            return h / 3 * (y[0] + y[-1] + 4 * np.sum(y[1:-1:2]) + 2 * np.sum(y[2:-1:2]))

        # E S^k = [s^k F] - k int s^{k-1} F ds = hi^k - k int s^{k-1} F ds,
        # using F(lo) ~ 0 and F(hi) ~ 1 (tails below 1e-7)
        F = np.asarray(F)
        m1 = hi - simpson(F)
        m2 = hi**2 - 2 * simpson(s * F)
        m3 = hi**3 - 3 * simpson(s**2 * F)
        var = m2 - m1**2
        skew = (m3 - 3 * m1 * var - m1**3) / var**1.5
        assert abs(m1) < 5e-3
        assert abs(var - 1.15039) < 5e-3
        assert abs(skew - 0.35941) < 8e-3
