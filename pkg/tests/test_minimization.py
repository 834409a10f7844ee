"""Minimization proof numerics: derivatives, bounds, lemmas, expansions."""

import math

import numpy as np
import pytest

from grksearch import (
    DomainError,
    GapRegime,
    alpha_opt,
    alpha_upper_bound,
    asymptotic_alpha,
    asymptotic_eta,
    asymptotic_gap,
    eta_opt,
    lemma1_aux,
    lemma1_margin,
    lemma2_slope,
    query_offset,
    query_offset_double_prime,
    query_offset_prime,
    scan_critical_points,
    verify_local_min,
)

INF = math.inf


class TestQueryOffset:
    def test_zero_at_origin(self):
        for k in (2, 3, 10, 77):
            assert query_offset(0.0, k) == 0.0

    def test_value_at_optimum_three_blocks(self):
        assert abs(query_offset(alpha_opt(3), 3) - (-0.337098)) < 1e-6

    def test_two_block_closed_form(self):
        expected = (math.pi / 4) * (1 - math.sqrt(2))
        assert abs(query_offset(alpha_opt(2), 2) - expected) < 1e-12
        assert abs(expected - (-0.325323)) < 1e-6

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            query_offset(1.2, 2)


class TestDerivatives:
    def test_first_derivative_vanishes_at_optimum(self):
        for k in range(3, 101):
            assert abs(query_offset_prime(alpha_opt(k), k)) <= 1e-9

    def test_second_derivative_positive(self):
        for k in range(3, 101):
            assert query_offset_double_prime(alpha_opt(k), k) > 0

    def test_denominator_at_optimum_four_blocks(self):
        # squared first-derivative denominator equals k^6/(k-1)^2
        k = 4
        s2 = math.sin(alpha_opt(k)) ** 2
        den = 16 * (k - 1) * s2 * s2 - 8 * k * s2 - k * k
        assert abs(den**2 - 4096 / 9) < 1e-9

    def test_matches_central_differences(self):
        h = 1e-6
        for k in range(3, 51):
            bound = alpha_upper_bound(k)
            for alpha in np.linspace(0.05, bound - 0.05, 24):
                fd = (query_offset(alpha + h, k) - query_offset(alpha - h, k)) / (2 * h)
                assert abs(fd - query_offset_prime(alpha, k)) < 1e-5

    def test_both_derivatives_vanish_at_two_block_saddle(self):
        assert abs(query_offset_prime(math.pi / 4, 2)) < 1e-12
        assert abs(query_offset_double_prime(math.pi / 4, 2)) < 1e-12


class TestVerifyLocalMin:
    def test_three_blocks(self):
        report = verify_local_min(3)
        assert report.local_min_confirmed
        assert report.second_derivative > 0
        assert abs(report.first_derivative) <= 1e-9

    def test_hundred_blocks(self):
        report = verify_local_min(100)
        assert report.local_min_confirmed
        assert abs(report.first_derivative) <= 1e-9

    def test_two_block_cubic_coefficient(self):
        report = verify_local_min(2)
        assert report.local_min_confirmed
        assert report.cubic_coefficient is not None
        assert abs(report.cubic_coefficient - (-4 / 6)) < 1e-4

    def test_global_minimality(self):
        for k in range(2, 101):
            report = verify_local_min(k)
            assert report.offset_value < 0
            assert report.offset_value <= min(report.boundary_values) + 1e-12

    @pytest.mark.parametrize("k", [2.5, 3, 4, 7, 25])
    def test_single_interior_critical_point(self, k):
        points = scan_critical_points(k)
        assert len(points) == 1
        assert abs(points[0] - alpha_opt(k)) < 1e-6


class TestAlphaUpperBound:
    @pytest.mark.parametrize(
        "k,expected,tol",
        [
            (2, math.pi / 4, 1e-12),
            (3, math.pi / 3, 1e-12),
            (4, math.pi / 2, 1e-12),
            (5, 1.22683, 1e-5),
            (6, 1.15100, 1e-5),
            (100, 0.956221, 1e-5),
            (INF, 0.947747, 1e-6),
        ],
    )
    def test_reference_values(self, k, expected, tol):
        assert abs(alpha_upper_bound(k) - expected) < tol

    def test_bounds_bracket_for_large_k(self):
        inf_bound = alpha_upper_bound(INF)
        for k in (5, 9, 40, 1000):
            assert inf_bound < alpha_upper_bound(k) < math.pi / 2

    def test_domain_error(self):
        with pytest.raises(DomainError):
            alpha_upper_bound(1)


class TestLemmas:
    def test_margin_at_two(self):
        assert abs(lemma1_margin(2) - (3 - 2 * math.sqrt(2)) * math.pi / 8) < 1e-12

    def test_margin_positive_and_increasing(self):
        xs = np.geomspace(2, 1e4, 200)
        values = [lemma1_margin(x) for x in xs]
        assert all(v > 0 for v in values)
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_slope_at_two(self):
        assert abs(lemma2_slope(2) - (math.sqrt(2) - math.pi / 2)) < 1e-12

    def test_slope_negative_on_grid(self):
        for x in np.geomspace(2, 1e4, 200):
            assert lemma2_slope(x) < 0

    def test_offset_strictly_decreasing(self):
        xs = np.geomspace(2, 1e4, 200)
        values = [alpha_opt(x) - eta_opt(x) for x in xs]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_aux_functions_vanish_at_infinity_from_correct_side(self):
        assert 0 < lemma1_aux(1e6) < 1e-8
        assert -1e-12 < lemma2_slope(1e6) < 0
        # the margin itself does not vanish; it saturates at pi/3 - sqrt(3)/2
        assert abs(lemma1_margin(1e6) - (math.pi / 3 - math.sqrt(3) / 2)) < 1e-5

    def test_aux_is_margin_derivative(self):
        h = 1e-5
        for x in (3.0, 7.3, 42.0):
            fd = (lemma1_margin(x + h) - lemma1_margin(x - h)) / (2 * h)
            assert abs(fd - lemma1_aux(x) / (4 * math.sqrt(x))) < 1e-8

    def test_slope_is_offset_derivative(self):
        h = 1e-5
        offset = lambda x: alpha_opt(x) - eta_opt(x)
        for x in (2.5, 7.3, 42.0):
            fd = (offset(x + h) - offset(x - h)) / (2 * h)
            assert abs(fd - lemma2_slope(x) / (4 * math.sqrt(x))) < 1e-8


class TestAsymptotics:
    def test_alpha_expansion(self):
        assert abs(alpha_opt(100) - asymptotic_alpha(100)) <= 1e-5

    def test_eta_expansion(self):
        assert abs(eta_opt(1000) - asymptotic_eta(1000)) <= 1e-7

    def test_gap_coefficients_positive(self):
        lead = math.pi / 3 - math.sqrt(3) / 2
        assert abs(lead - 0.181172) < 1e-6
        assert asymptotic_gap(100, 10**4, GapRegime.RATIO_TO_ZERO) > 0
        assert asymptotic_gap(10**4, 100, GapRegime.RATIO_TO_INFINITY) > 0

    def test_regime_values(self):
        assert abs(
            asymptotic_gap(64, 4096, GapRegime.RATIO_TO_ZERO)
            - (math.pi / 3 - math.sqrt(3) / 2) / 8
        ) < 1e-12
        assert abs(
            asymptotic_gap(1024, 16, GapRegime.RATIO_TO_INFINITY)
            - 1 / (20 * math.sqrt(3)) / (32 * 16**2.5)
        ) < 1e-15

    def test_bad_regime_rejected(self):
        with pytest.raises(DomainError):
            asymptotic_gap(10, 10, "sideways")
