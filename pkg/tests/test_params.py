import math
from fractions import Fraction

import pytest

from kpzlab.params import (
    ASEPParams,
    FerroWeights,
    MappingDomainError,
    ParameterDomainError,
    derive_six_vertex,
    ferro_to_stochastic,
    free_energy,
    scaling_constants,
    stochastic_to_ferro,
    translation_invariant_b2,
)


class TestDeriveSixVertex:
    def test_reference_point(self):
        p = derive_six_vertex(0.25, 0.5, 0.5, 0.4)
        assert p.q == pytest.approx(0.5, abs=0)
        assert p.kappa == pytest.approx(1.5, abs=1e-15)
        assert p.beta1 == pytest.approx(1.0, abs=1e-15)
        assert p.beta2 == pytest.approx(Fraction(2, 3), abs=1e-15)
        assert p.translation_invariant

    def test_order_violation(self):
        with pytest.raises(ParameterDomainError, match="delta1 < delta2"):
            derive_six_vertex(0.5, 0.25, 0.5, 0.4)

    def test_not_translation_invariant(self):
        p = derive_six_vertex(0.25, 0.5, 0.5, 0.5)
        # kappa*beta2 = 1.5 != 1 = beta1
        assert not p.translation_invariant

    def test_q_and_kappa_individually_bounded(self):
        p = derive_six_vertex(0.1, 0.9, 0.3, 0.2)
        assert 0 < p.q < 1 < p.kappa
        p.validate()


class TestTranslationInvariantB2:
    def test_reference(self):
        assert translation_invariant_b2(0.25, 0.5, 0.5) == pytest.approx(0.4, abs=1e-15)

    def test_equal_delta_limit(self):
        b1 = 0.37
        b2 = translation_invariant_b2(0.5 - 1e-12, 0.5, b1)
        assert b2 == pytest.approx(b1, abs=1e-9)

    def test_round_trip_flag(self):
        for (d1, d2, b1) in [(0.25, 0.5, 0.5), (0.1, 0.7, 0.3), (0.4, 0.6, 0.8)]:
            b2 = translation_invariant_b2(d1, d2, b1)
            assert derive_six_vertex(d1, d2, b1, b2).translation_invariant


class TestScalingConstants:
    def test_asep_half(self):
        sc = scaling_constants(ASEPParams(L=0.25, R=1.0, b1=0.5, b2=0.5))
        assert sc.eta == 0.0
        assert sc.m == 0.25
        assert sc.F == pytest.approx(0.25 ** (2.0 / 3.0), abs=1e-15)
        assert sc.chi == 0.25

    def test_asep_characteristic_position_symmetric(self):
        sc = scaling_constants(ASEPParams(L=0.25, R=1.0, b1=0.5, b2=0.5))
        for T in (10.0, 100.0, 1234.5):
            assert sc.x_of_T(T, c=0.0) == 0

    def test_vertex_reference(self):
        p = derive_six_vertex(0.25, 0.5, 0.5, 0.4)
        sc = scaling_constants(p)
        assert sc.Lambda == pytest.approx(1.25, abs=1e-15)
        assert sc.theta == pytest.approx(25.0 / 24.0, abs=1e-15)
        assert sc.m == pytest.approx(0.25 * (1 - 2.0 / 3.0), abs=1e-15)

    def test_vertex_rational_identities(self):
        # exact algebraic relations among the constants at rational points
        for (d1, d2, b1) in [
            (Fraction(1, 4), Fraction(1, 2), Fraction(1, 2)),
            (Fraction(1, 5), Fraction(3, 5), Fraction(2, 5)),
            (Fraction(3, 10), Fraction(7, 10), Fraction(3, 5)),
        ]:
            kappa = (1 - d1) / (1 - d2)
            beta1 = b1 / (1 - b1)
            b2 = beta1 / (kappa + beta1)
            p = derive_six_vertex(float(d1), float(d2), float(b1), float(b2))
            sc = scaling_constants(p)
            Lam = b1 + kappa * (1 - b1)
            assert sc.Lambda == pytest.approx(float(Lam), rel=1e-14)
            assert sc.theta == pytest.approx(float(Lam * Lam / kappa), rel=1e-14)
            # height-scale constant factorizes as F * y_dir^{1/3}
            assert sc.F_height**3 == pytest.approx(sc.F**3 * sc.y_dir, rel=1e-12)
            # b1 * Lambda2 = b2 and x_dir = theta * y_dir
            assert float(b1) * sc.Lambda2 == pytest.approx(float(b2), rel=1e-14)
            assert sc.x_dir == pytest.approx(sc.theta * sc.y_dir, rel=1e-13)

    def test_non_stationary_rejected(self):
        p = derive_six_vertex(0.25, 0.5, 0.5, 0.5)
        with pytest.raises(ParameterDomainError):
            scaling_constants(p)
        with pytest.raises(ParameterDomainError):
            scaling_constants(ASEPParams(L=0.1, R=1.0, b1=0.5, b2=0.3))


class TestFerroMapping:
    def test_reference_weights(self):
        w = FerroWeights(2.0, 1.0, 0.5)
        assert w.Delta == pytest.approx(1.1875, abs=1e-15)
        d1, d2 = ferro_to_stochastic(w)
        assert d1 == pytest.approx(0.2735327885637626, abs=1e-12)
        assert d2 == pytest.approx(0.9139672114362374, abs=1e-12)

    def test_delta_boundary(self):
        w = FerroWeights(2.0, 1.0, 1.0)
        assert w.Delta == 1.0
        with pytest.raises(MappingDomainError):
            ferro_to_stochastic(w)

    def test_product_identity(self):
        for (a, b, c) in [(2.0, 1.0, 0.5), (3.0, 1.2, 0.7), (1.5, 0.5, 0.4)]:
            w = FerroWeights(a, b, c)
            d1, d2 = ferro_to_stochastic(w)
            assert d1 * d2 == pytest.approx(b * b / (a * a), rel=1e-13)

    def test_round_trip_both_ways(self):
        for (d1, d2) in [(0.25, 0.5), (0.2735327885637626, 0.9139672114362374), (0.1, 0.3)]:
            w = stochastic_to_ferro(d1, d2)
            r1, r2 = ferro_to_stochastic(w)
            assert abs(r1 - d1) < 1e-12 and abs(r2 - d2) < 1e-12
            assert d1 * d2 == pytest.approx(w.b**2, rel=1e-13)  # a = 1 normalization

    def test_inverse_rescaling(self):
        # inverting the image of (2, 1, 0.5) recovers weights proportional to it
        w0 = FerroWeights(2.0, 1.0, 0.5)
        d1, d2 = ferro_to_stochastic(w0)
        w = stochastic_to_ferro(d1, d2)
        assert w.b / w.a == pytest.approx(0.5, rel=1e-12)
        assert w.c / w.a == pytest.approx(0.25, rel=1e-12)

    def test_equal_deltas_rejected(self):
        with pytest.raises(ParameterDomainError):
            stochastic_to_ferro(0.4, 0.4)


class TestFreeEnergy:
    def test_equal_slopes(self):
        w = FerroWeights(2.0, 1.0, 0.5)
        assert free_energy(w, 0.37, 0.37) == -math.log(2.0)

    def test_reference_value(self):
        w = FerroWeights(2.0, 1.0, 0.5)
        expected = -0.1 * math.log(w.Delta - math.sqrt(w.Delta**2 - 1)) - math.log(2.0)
        assert free_energy(w, 0.4, 0.5) == pytest.approx(expected, rel=1e-14)
        # frozen closed-formula value
        assert free_energy(w, 0.4, 0.5) == pytest.approx(-0.6328285206913119, abs=1e-12)

    def test_monotone_in_slope_difference(self):
        w = FerroWeights(2.0, 1.0, 0.5)
        vals = [free_energy(w, h, 0.5) for h in (0.2, 0.4, 0.6, 0.8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))  # log(Delta - root) < 0
