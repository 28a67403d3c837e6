"""Pattern combinatorics, certificate checks, and code bounds."""

from math import cos, pi, sqrt

import numpy as np
import pytest

from spherepd import codebounds as cb
from spherepd.codebounds import (
    CertificateError,
    CodeProblem,
    PartitionPattern,
    code_audit,
    delsarte_bound,
    delsarte_lp,
    enumerate_patterns,
    estimate_B,
    greedy_code,
    pattern_of,
    pattern_of_x,
    q_omega,
    q_omega_brute,
    theorem61_bound,
    verify_nonpositive,
)
from spherepd.spherical import named_code


class TestPatterns:
    def test_partition_counts(self):
        # partition numbers p(1)..p(7)
        expected = {1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 6: 11, 7: 15}
        for d, count in expected.items():
            assert len(enumerate_patterns(d)) == count

    def test_pattern_of(self):
        assert pattern_of([1, 2, 1, 3]).parts == (2, 1, 1)
        assert pattern_of([7, 7, 7]).parts == (3,)
        assert pattern_of(range(5)).parts == (1, 1, 1, 1, 1)

    def test_invalid_parts(self):
        with pytest.raises(ValueError):
            PartitionPattern((1, 2))  # not weakly decreasing
        with pytest.raises(ValueError):
            PartitionPattern((0,))


class TestQOmega:
    def test_known_closed_forms(self):
        for big_n in (1, 2, 5, 8):
            assert q_omega(PartitionPattern((2,)), big_n) == 1
            assert q_omega(PartitionPattern((1, 1)), big_n) == big_n - 1
            assert q_omega(PartitionPattern((3,)), big_n) == 1
            assert q_omega(PartitionPattern((2, 1)), big_n) == 3 * (big_n - 1)
            assert q_omega(PartitionPattern((1, 1, 1)), big_n) == (big_n - 1) * (big_n - 2)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_brute_enumeration(self, d):
        for big_n in range(1, 9):
            for omega in enumerate_patterns(d):
                assert q_omega(omega, big_n) == q_omega_brute(omega, big_n)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_total_count_identity(self, d):
        for big_n in range(1, 9):
            total = sum(q_omega(omega, big_n) for omega in enumerate_patterns(d))
            assert total == big_n ** (d - 1)


class TestPatternOfX:
    def test_all_merged(self):
        assert pattern_of_x([1.0, 1.0, 1.0], 3, pi / 2).parts == (3,)

    def test_all_distinct(self):
        assert pattern_of_x([0.0, -0.3, 0.2], 3, pi / 3).parts == (1, 1, 1)

    def test_one_merged_pair(self):
        assert pattern_of_x([1.0, 0.1, 0.1], 3, pi / 3).parts == (2, 1)

    def test_forbidden_gap(self):
        with pytest.raises(ValueError, match="forbidden"):
            pattern_of_x([0.8, 0.0, 0.0], 3, pi / 3)


class TestVerifyNonpositive:
    def test_t_times_t_plus_one(self):
        assert verify_nonpositive([0.0, 1.0, 1.0], pi / 2)

    def test_linear_positive_at_cap(self):
        assert not verify_nonpositive([1.0, 1.0], 2.0)

    def test_negated_square(self):
        c = cos(pi / 3)
        # -(t - cos theta)^2
        assert verify_nonpositive([-(c**2), 2 * c, -1.0], pi / 3)

    def test_interior_spike_caught(self):
        # positive bump hidden between likely grid points
        center = -0.123456789
        coeffs = np.polynomial.polynomial.polyfromroots([center - 1e-7, center + 1e-7])
        assert not verify_nonpositive(-coeffs + np.array([1e-10, 0, 0]), pi / 2, grid=100)


class TestDelsarteBound:
    def test_quadratic_certificate_gives_2n(self):
        for n in range(3, 9):
            bound = delsarte_bound([0.0, 1.0, 1.0], n, pi / 2)
            assert bound == pytest.approx(2 * n, abs=1e-9)

    def test_linear_certificate_antipodal(self):
        assert delsarte_bound([1.0, 1.0], 4, pi) == pytest.approx(2.0, abs=1e-12)

    def test_scaling_invariance(self):
        b1 = delsarte_bound([0.0, 1.0, 1.0], 5, pi / 2)
        b2 = delsarte_bound([0.0, 17.0, 17.0], 5, pi / 2)
        assert b1 == pytest.approx(b2, rel=1e-14)

    def test_refuses_positive_region(self):
        with pytest.raises(CertificateError, match="positive somewhere"):
            delsarte_bound([0.0, 1.0, 1.0], 4, pi / 3)

    def test_refuses_negative_expansion(self):
        # G_1 - G_2 has a negative expansion coefficient
        n = 4
        g2 = np.array([-1.0 / (n - 1), 0.0, n / (n - 1)])
        coeffs = np.array([0.5, 1.0, 0.0]) - g2
        with pytest.raises(CertificateError, match="negative"):
            delsarte_bound(coeffs, n, pi / 2)


class TestDelsarteLp:
    def test_orthogonal_angle_matches_cross_polytope(self):
        for n in (3, 4, 6):
            cert = delsarte_lp(n, pi / 2, degree=4, grid_size=512)
            assert 2 * n - 1e-9 <= cert.bound <= 2 * n + 1e-6
            witness = named_code(f"cross_polytope({n})")
            assert code_audit(witness, pi / 2)
            assert witness.size <= cert.bound + 1e-9

    def test_kissing_angle_dimension_three(self):
        cert = delsarte_lp(3, pi / 3, degree=9, grid_size=1024)
        assert 12.0 <= cert.bound < 14.0
        witness = named_code("icosahedron")
        assert code_audit(witness, pi / 3)

    def test_degree_monotone(self):
        b1 = delsarte_lp(4, pi / 3, degree=6, grid_size=512).bound
        b2 = delsarte_lp(4, pi / 3, degree=10, grid_size=512).bound
        assert b2 <= b1 + 1e-9

    def test_certificate_recomputes_bound(self):
        cert = delsarte_lp(5, pi / 2, degree=6, grid_size=512)
        coeffs = np.array(cert.coefficients)
        from spherepd.gegenbauer import gegenbauer_expansion

        exp = gegenbauer_expansion(coeffs, 5)
        assert cert.bound == pytest.approx(coeffs.sum() / exp[0], rel=1e-10)


class TestTheorem61:
    def test_m0_matches_delsarte_bitwise(self):
        from spherepd.gegenbauer import gegenbauer_expansion

        coeffs = [0.0, 1.0, 1.0]
        n = 6
        exp = gegenbauer_expansion(coeffs, n)
        direct = delsarte_bound(coeffs, n, pi / 2)
        res = theorem61_bound(0, float(exp[0]), float(np.sum(coeffs)), {})
        assert res.ratio == direct  # identical float division
        assert res.n_max == int(direct + 1e-9)

    def test_m1_reduction_formula(self):
        f0, f_diag, b = 0.25, 2.0, 1.5
        res = theorem61_bound(1, f0, f_diag, {(2, 1): b})
        big_n = res.n_max
        assert f0 * big_n**2 <= f_diag + 3 * (big_n - 1) * b + 1e-12
        assert f0 * (big_n + 1) ** 2 > f_diag + 3 * big_n * b

    def test_m2_zero_b_cube_root(self):
        res = theorem61_bound(2, 1.0, 100.0, {})
        assert res.n_max == 4  # floor of 100^(1/3)

    def test_negative_b_clamped(self):
        res_zero = theorem61_bound(1, 0.25, 2.0, {(2, 1): 0.0})
        res_neg = theorem61_bound(1, 0.25, 2.0, {(2, 1): -5.0})
        assert res_neg.n_max == res_zero.n_max

    def test_residual_signs(self):
        res = theorem61_bound(1, 0.25, 2.0, {(2, 1): 1.5})
        assert res.residual_at_n >= 0 > res.residual_at_next

    def test_rejects_bad_f0(self):
        with pytest.raises(ValueError):
            theorem61_bound(0, 0.0, 1.0, {})


class TestEstimateB:
    def make_problem(self, n=4, theta=pi / 2, m=1):
        return CodeProblem(n=n, theta=theta, m=m, f=lambda g: float(np.sum(g)), f0=0.5)

    def test_all_merged_is_exact(self):
        prob = self.make_problem()
        val = estimate_B(PartitionPattern((3,)), prob, budget=10, seed=0)
        assert val == pytest.approx(9.0)

    def test_constant_function(self):
        prob = CodeProblem(n=4, theta=pi / 2, m=1, f=lambda g: 7.0, f0=1.0)
        assert estimate_B(PartitionPattern((2, 1)), prob, budget=50, seed=0) == 7.0

    def test_pairwise_maximum_approached(self):
        # d = 2, f = x12: the supremum over (1,1) is cos theta
        prob = CodeProblem(n=3, theta=pi / 3, m=0, f=lambda g: float(g[0, 1]), f0=1.0)
        val = estimate_B(PartitionPattern((1, 1)), prob, budget=4000, seed=1)
        assert val == pytest.approx(cos(pi / 3), abs=1e-3)
        assert val <= cos(pi / 3) + 1e-12

    def test_budget_monotone(self):
        prob = self.make_problem()
        lo = estimate_B(PartitionPattern((1, 1, 1)), prob, budget=100, seed=2)
        hi = estimate_B(PartitionPattern((1, 1, 1)), prob, budget=2000, seed=2)
        assert hi >= lo


class TestCodes:
    def test_greedy_respects_angle(self):
        for seed in (0, 1, 2):
            pts = greedy_code(4, pi / 3, seed)
            assert code_audit(pts, pi / 3)
            assert pts.size >= 2

    def test_greedy_deterministic(self):
        a = greedy_code(3, pi / 2, seed=5)
        b = greedy_code(3, pi / 2, seed=5)
        assert np.array_equal(a.coords, b.coords)

    def test_audit_thresholds(self):
        ico = named_code("icosahedron")
        assert code_audit(ico, float(np.arccos(1 / sqrt(5.0))))
        assert not code_audit(ico, pi / 2)
