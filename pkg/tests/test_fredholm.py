import numpy as np
import pytest

from kpzlab.contours import Circle, DContour, place_contours_vertex, place_moment_base_contour
from kpzlab.fredholm import (
    SeriesDivergence,
    dcontour_feasible,
    estimate_series_radius,
    f_vertex_moment,
    fredholm_det_nystrom,
    fredholm_det_series,
    generating_series_check,
    kernel_dcontour_matrix,
    kernel_V_matrix,
    log_g_vertex,
    moment_via_partitions,
    q_moment_integral,
)
from kpzlab.params import derive_six_vertex
from kpzlab.vertex import exact_fredholm_lhs, weighted_height_qmoment

P_SMALL_B2 = derive_six_vertex(0.25, 0.5, 0.5, 0.1)
P_MAIN = derive_six_vertex(0.25, 0.5, 0.5, 0.3)


def small_b2_params(kb2=0.04, b1=0.5):
    beta2 = kb2 / 1.5
    return derive_six_vertex(0.25, 0.5, b1, beta2 / (1 + beta2))


class TestDeterminantBasics:
    def test_zero_kernel(self):
        c = Circle(0.0, 1.0, 32)
        K = np.zeros((32, 32), dtype=complex)
        assert fredholm_det_nystrom(K, c) == pytest.approx(1.0)
        assert fredholm_det_series(K, c) == pytest.approx(1.0)

    def test_rank_one_kernel_truncates(self):
        # K(w,w') = f(w) g(w'): det = 1 + (1/2pi i) oint f g dz
        c = Circle(0.0, 1.0, 64)
        f = c.nodes**2
        g = 1.0 / (c.nodes - 3.0)
        K = f[:, None] * g[None, :]
        expected = 1.0 + np.sum(c.weights * f * g) / (2j * np.pi)
        dn = fredholm_det_nystrom(K, c)
        ds = fredholm_det_series(K, c, k_max=6)
        assert abs(dn - expected) < 1e-12
        assert abs(ds - expected) < 1e-12

    def test_single_node_diagonal(self):
        c = Circle(0.0, 1.0, 1)
        K = np.array([[2.0 + 0j]])
        expected = 1.0 + c.weights[0] * 2.0 / (2j * np.pi)
        assert fredholm_det_nystrom(K, c) == pytest.approx(expected)

    def test_series_divergence_is_loud(self):
        c = Circle(0.0, 1.0, 24)
        K = 80.0 * np.ones((24, 24), dtype=complex) + np.diag(np.arange(24) * 30.0)
        with pytest.raises(SeriesDivergence):
            fredholm_det_series(K, c, k_max=8)


class TestVertexKernel:
    def test_jsum_tail_negligible(self):
        # the |j| = 6 summand is already below 1e-14 of the j = 0 one
        import math

        from kpzlab.fredholm import _inv_sin_safe

        q = 0.5
        lq = math.log(q)
        z0 = np.array([np.pi * (0.3 + 2j * np.pi * 0 / lq)])
        z6 = np.array([np.pi * (0.3 + 2j * np.pi * 6 / lq)])
        assert abs(_inv_sin_safe(z6)[0]) < 1e-14 * abs(_inv_sin_safe(z0)[0])

    def test_identity_small_window(self):
        gamma, cv = place_contours_vertex(P_MAIN, n=384)
        lhs = exact_fredholm_lhs(P_MAIN, 3, 3, -P_MAIN.q)
        det = fredholm_det_nystrom(kernel_V_matrix(P_MAIN, 3, 3, 1, cv, gamma), cv)
        assert abs(lhs - det) < 1e-8

    def test_deformation_invariance(self):
        gamma, cv = place_contours_vertex(P_MAIN, n=384)
        K0 = fredholm_det_nystrom(kernel_V_matrix(P_MAIN, 4, 4, 1, cv, gamma), cv)
        for fac in (0.99, 1.01):
            g2 = Circle(gamma.center, gamma.radius * fac, 384)
            c2 = Circle(cv.center, cv.radius * fac, 384)
            K2 = fredholm_det_nystrom(kernel_V_matrix(P_MAIN, 4, 4, 1, c2, g2), c2)
            assert abs(K2 - K0) < 1e-9

    def test_node_doubling_stability(self):
        vals = []
        for n in (384, 768):
            gamma, cv = place_contours_vertex(P_MAIN, n=n)
            vals.append(fredholm_det_nystrom(kernel_V_matrix(P_MAIN, 4, 4, 3, cv, gamma), cv))
        assert abs(vals[0] - vals[1]) < 1e-9

    def test_dcontour_truncation_stability(self):
        # raising the imaginary cutoff by 50% moves kernel entries < 1e-12
        x = t = 3
        _, cv = place_contours_vertex(P_SMALL_B2, n=64)
        lg = lambda z: log_g_vertex(z, P_SMALL_B2, x, t)
        K1 = kernel_dcontour_matrix(lg, -P_SMALL_B2.q, P_SMALL_B2.q, cv,
                                    DContour(1.2, 0.05, 0.9, im_cutoff=12.0, n_tail=320, n_core=64))
        K2 = kernel_dcontour_matrix(lg, -P_SMALL_B2.q, P_SMALL_B2.q, cv,
                                    DContour(1.2, 0.05, 0.9, im_cutoff=18.0, n_tail=480, n_core=64))
        assert np.max(np.abs(K1 - K2)) < 1e-12

    def test_dual_representation_including_noninteger_p(self):
        x = t = 3
        gamma, cv = place_contours_vertex(P_SMALL_B2, n=256)
        R = 1.2
        assert dcontour_feasible(P_SMALL_B2.q, P_SMALL_B2.kappa * P_SMALL_B2.beta2, cv, R)
        dc = DContour(R, 0.05, 0.9, im_cutoff=14.0, n_tail=128, n_core=48)
        lg = lambda z: log_g_vertex(z, P_SMALL_B2, x, t)
        for pe in (1.0, 2.3):
            Kj = kernel_V_matrix(P_SMALL_B2, x, t, pe, cv, gamma)
            Kd = kernel_dcontour_matrix(lg, -P_SMALL_B2.q**pe, P_SMALL_B2.q, cv, dc)
            assert np.max(np.abs(Kj - Kd)) < 1e-8


class TestMoments:
    def test_k_zero(self):
        p = small_b2_params()
        assert q_moment_integral(p, 3, 3, 0, 1) == 1.0

    def test_k1_residue_oracle(self):
        # independent residue computation via sympy for the one-fold integral
        import sympy as sp

        p = small_b2_params(kb2=0.04)
        x, t, J = 3, 2, 1
        q, kap, b1 = sp.Rational(1, 2), sp.Rational(3, 2), sp.Integer(1)
        kb2 = sp.Rational(1, 25)
        theta = q ** (-J)
        y = sp.symbols("y")
        expr = (
            ((1 + y) / (1 + y / q)) ** t
            * ((1 + y / (q * kap)) / (1 + y / kap)) ** (x - 1)
            / (1 - y / (q * b1))
            * (1 - theta * kb2 / y)
            / (1 - kb2 / y)
            / y
        )
        total = sum(sp.residue(expr, y, pole) for pole in (0, kb2, -q))
        val = q_moment_integral(p, x, t, 1, J)
        assert abs(complex(total) - val) < 1e-10

    def test_nested_equals_enumeration(self):
        p = small_b2_params()
        for (x, t, k, J) in [(2, 2, 1, 1), (3, 3, 2, 2), (4, 3, 2, 1)]:
            lhs = q_moment_integral(p, x, t, k, J)
            rhs = weighted_height_qmoment(p, x, t, k, J)
            assert abs(lhs - rhs) < 1e-10

    def test_partition_form_matches_nested(self):
        p = small_b2_params(kb2=0.01, b1=0.6)
        x, t, J = 3, 3, 2
        theta = p.q ** (-J)
        f = lambda z: f_vertex_moment(z, p, x - 1, t, theta)
        for k in (1, 2, 3):
            c = place_moment_base_contour(p.q, p.kappa, p.beta1, p.kappa * p.beta2, k_max=k, n=220)
            m_part = moment_via_partitions(f, c, k, p.q)
            m_nest = q_moment_integral(p, x, t, k, J)
            assert abs(m_part - m_nest) < 1e-8

    def test_constant_symbol_gives_unit_moments(self):
        # f = 1 makes every moment 1 (zero-height observable)
        c = Circle(-0.05, 0.4, 128)
        for k in (1, 2, 3, 4):
            mk = moment_via_partitions(lambda z: np.ones_like(z), c, k, 0.5)
            assert abs(mk - 1.0) < 1e-10


class TestAsepKernel:
    def test_small_q_pochhammer_truncation(self):
        # as L -> 0 (q -> 0) the infinite products collapse to a few factors
        from kpzlab.fredholm import log_g_asep
        from kpzlab.params import ASEPParams

        ap = ASEPParams(L=0.01, R=1.0, b1=0.6, b2=0.3)
        q = ap.q
        b1, b2 = 1.5, 3.0 / 7.0
        z = np.array([0.3 + 0.2j, -0.05 + 0.1j, 0.15 - 0.25j])
        x, T = 2, 1.0
        truncated = (
            x * np.log(z + q)
            + T * q * (ap.R - ap.L) / (z + q)
            + np.log(1 - q * b2 / z)
            + np.log(1 - q * q * b2 / z)
            - np.log(1 - z / (q * b1))
            - np.log(1 - z / b1)
            - np.log(1 - q * z / b1)
            - np.log(1 - q * q * z / b1)
        )
        full = log_g_asep(z, ap, x, T)
        assert np.max(np.abs(np.exp(full) - np.exp(truncated)) / np.abs(np.exp(full))) < 1e-5

    def test_degeneration_to_vertex_kernel_linear_in_eps(self):
        import functools

        from kpzlab.contours import place_contours_asep
        from kpzlab.fredholm import kernel_A_matrix, kernel_jsum_matrix
        from kpzlab.params import ASEPParams, derive_six_vertex

        ap = ASEPParams(L=0.25, R=1.0, b1=0.6, b2=0.3)
        gamma, ca = place_contours_asep(ap, n=48)
        KA = kernel_A_matrix(ap, x=0, T=1.0, p_exp=1, cw=ca, gamma=gamma)
        diffs = []
        for eps in (1e-3, 1e-4):
            tt = int(round(1.0 / eps))
            pv = derive_six_vertex(eps * ap.L, eps * ap.R, ap.b1, ap.b2)
            lg = functools.partial(log_g_vertex, params=pv, x=tt, t=tt)
            KV = kernel_jsum_matrix(lg, 1, ca, gamma, pv.q)
            diffs.append(float(np.max(np.abs(KA - KV))))
        # O(eps) convergence: a decade in eps buys a decade in the gap
        assert diffs[1] < 0.2 * diffs[0]
        assert diffs[1] < 1e-3


class TestGeneratingSeries:
    def setup_method(self):
        self.p = derive_six_vertex(0.125, 0.5, 0.7, 2e-4)
        self.c = place_moment_base_contour(
            self.p.q, self.p.kappa, self.p.beta1, self.p.kappa * self.p.beta2, k_max=6, n=220
        )
        self.dc = DContour(1.2, 0.05, 0.9, im_cutoff=14.0, n_tail=128, n_core=48)
        self.lg = lambda z: log_g_vertex(z, self.p, 3, 3)

    def test_identity_at_small_zeta(self):
        res = generating_series_check(self.lg, self.c, self.dc, -self.p.q**5, self.p.q, k_max=6)
        assert res.gap < 1e-7
        # truncation slack: the last two series terms are already negligible
        assert abs(res.terms[-1]) + abs(res.terms[-2]) < 1e-10

    def test_zeta_zero_limit(self):
        res = generating_series_check(self.lg, self.c, self.dc, -self.p.q**14, self.p.q, k_max=3)
        assert abs(res.lhs - 1.0) < 1e-7 and abs(res.rhs - 1.0) < 1e-7

    def test_radius_guard(self):
        f = lambda z: np.exp(self.lg(z) - self.lg(self.p.q * np.asarray(z, complex)))
        radius = estimate_series_radius(f, self.c, self.p.q)
        with pytest.raises(ValueError):
            generating_series_check(self.lg, self.c, self.dc, -2.0 * radius, self.p.q)
