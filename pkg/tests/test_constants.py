import math
from fractions import Fraction

import pytest

from delpezzo import constants as C
from delpezzo.errors import SizeCapError, ToleranceError


class TestQuadrature:
    def test_polynomial_exact(self):
        v, e = C.adaptive_quadrature(lambda x: x**3 - x, 0.0, 2.0, 1e-12)
        assert abs(v - 2.0) < 1e-11

    def test_real_density_vs_beta_oracle(self):
        c, err = C.real_density_integral(1e-12)
        assert abs(c - C.real_density_beta_oracle()) <= 1e-10
        assert err < 1e-10

    def test_refinement_stability(self):
        c1, _ = C.real_density_integral(1e-8)
        c2, _ = C.real_density_integral(1e-9)
        assert abs(c1 - c2) <= 1e-8

    def test_archimedean_is_sixteen_c(self):
        c, _ = C.real_density_integral(1e-12)
        om, _ = C.archimedean_density(1e-12)
        assert abs(om - 16 * c) < 1e-10

    def test_coarse_bracket(self):
        c, _ = C.real_density_integral(1e-10)
        assert 0.5 < c < 1.0

    def test_tolerance_floor(self):
        with pytest.raises(ToleranceError):
            C.real_density_integral(1e-20)


class TestAlpha:
    def test_value(self):
        assert C.peyre_alpha() == Fraction(1, 288)

    def test_simplex_helper(self):
        assert C.simplex_volume((1, 1)) == Fraction(1, 2)
        assert C.simplex_volume((4, 2, 3)) == Fraction(1, 144)


class TestEulerProduct:
    def test_factor_at_2(self):
        assert C.tau_factor_exact(2) == Fraction(5, 32)

    def test_factor_at_3(self):
        expect = Fraction(2, 3) ** 4 * Fraction(4, 3) ** 2 * (1 + Fraction(2, 3) + Fraction(1, 9))
        assert C.tau_factor_exact(3) == expect

    def test_cutoff_consistency(self):
        t4, tail4 = C.tamagawa_euler_product(10**4)
        t5, _ = C.tamagawa_euler_product(10**5)
        assert abs(t4 - t5) <= tail4

    def test_cutoff_floor(self):
        with pytest.raises(ValueError):
            C.tamagawa_euler_product(10)


class TestLocalDensities:
    def test_closed_values(self):
        assert C.local_density_closed(2) == Fraction(5, 2)
        assert C.local_density_closed(3) == Fraction(16, 9)
        assert C.local_density_closed(5) == Fraction(56, 25)

    @pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)])
    def test_naive_is_oracle_for_tables(self, p, r):
        assert C.local_density_brute(p, r, mode="naive") == \
            C.local_density_brute(p, r, mode="tables")

    def test_frozen_small_counts(self):
        assert C.local_density_brute(2, 1) == Fraction(8, 8)
        assert C.local_density_brute(2, 2) == Fraction(80, 64)
        assert C.local_density_brute(3, 1) == Fraction(21, 27)
        assert C.local_density_brute(3, 2) == Fraction(891, 729)

    def test_sequence_increases_toward_limit(self):
        vals = [C.local_density_brute(2, r, mode="tables") for r in range(1, 7)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert all(v <= Fraction(5, 2) for v in vals)

    def test_parity_subsequences_monotone_p3(self):
        # at p = 3 the raw sequence oscillates with the parity of r, but each
        # parity subsequence increases from below toward the closed form
        vals = [C.local_density_brute(3, r, mode="tables") for r in range(1, 7)]
        closed = C.local_density_closed(3)
        assert all(v <= closed for v in vals)
        assert all(a <= b for a, b in zip(vals[0::2], vals[2::2]))
        assert all(a <= b for a, b in zip(vals[1::2], vals[3::2]))

    def test_caps(self):
        with pytest.raises(SizeCapError):
            C.local_density_brute(7, 2, mode="naive")
        with pytest.raises(SizeCapError):
            C.local_density_brute(101, 2, mode="tables")


class TestLattice:
    def test_checks_pass(self):
        rep = C.picard_lattice_checks()
        assert rep["deg"] == 4
        assert rep["K_dot_E"] == [0, 0, 0, 0]
        assert rep["K_dot_L"] == [1, 1]
        assert rep["picard_rank"] == 4

    def test_pairing_examples(self):
        e1 = (1, 0, 0, 0, 0, 0)
        e2 = (0, 1, 0, 0, 0, 0)
        assert C.intersection_pairing(e1, e2) == 1
        assert C.intersection_pairing(e1, e1) == -2
        K = C.ANTICANONICAL
        assert C.intersection_pairing(K, K) == 4


class TestBundle:
    def test_leading_coefficient_identities(self):
        c, _ = C.real_density_integral(1e-12)
        tau, _ = C.tamagawa_euler_product(10**4)
        lead = C.leading_coefficient(c, tau)
        om, _ = C.archimedean_density(1e-12)
        peyre = float(C.peyre_alpha()) * C.tamagawa_measure(om, tau)
        assert abs(lead - peyre) <= 1e-12 * abs(lead) * 10
        assert lead > 0

    def test_residue_display_differs_by_four_thirds(self):
        c, tau = 0.874, 0.0388
        assert abs(C.leading_coefficient(c, tau) / C.residue_display_coefficient(c, tau) - 4 / 3) < 1e-12

    def test_bundle_cross_identities(self):
        b = C.constant_bundle(prime_cutoff=10**4, quad_tol=1e-10, beta_cutoff=10)
        assert abs(b.omega_inf - 16 * b.c) <= 2e-10 + b.omega_inf_error + 16 * b.c_error
        assert abs(b.peyre - b.leading_coeff) <= 1e-9 * abs(b.leading_coeff) + b.peyre_error
        assert b.alpha == Fraction(1, 288)
        assert b.tau_tail > 0 and b.beta_tail > 0
