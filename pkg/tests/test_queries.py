"""Closed-form query counts and the scaled-parameter optimum."""

import math
import random

import pytest

from grksearch import (
    DatabaseGeometry,
    DomainError,
    IterationSchedule,
    ScaledParams,
    alpha_opt,
    binary_queries,
    complement_queries,
    direct_coefficient,
    eta_of_alpha,
    eta_opt,
    gap_decomposition,
    grk_coefficient,
    hierarchy_coefficient,
    hierarchy_gap,
    naive_queries,
    sequential_coefficient,
)

PI4 = math.pi / 4


class TestOptimalParameters:
    def test_alpha_two_blocks(self):
        assert abs(alpha_opt(2) - PI4) < 1e-15

    def test_alpha_four_blocks(self):
        # direct evaluation: (1/2) arccos(1/3)
        assert abs(alpha_opt(4) - 0.5 * math.acos(1 / 3)) < 1e-15
        assert abs(alpha_opt(4) - 0.615480) < 1e-6

    def test_eta_two_blocks(self):
        assert abs(eta_opt(2) - math.pi / (2 * math.sqrt(2))) < 1e-15
        assert abs(eta_opt(2) - 1.110721) < 1e-6

    def test_eta_four_blocks(self):
        assert abs(eta_opt(4) - math.atan(math.sqrt(2))) < 1e-15
        assert abs(eta_opt(4) - 0.955317) < 1e-6

    def test_domain_errors(self):
        for fn in (alpha_opt, eta_opt):
            with pytest.raises(DomainError):
                fn(1.5)


class TestCancellationConstraint:
    def test_zero_alpha_gives_zero_eta(self):
        for k in (2, 3, 7.5, 100):
            assert eta_of_alpha(0.0, k) == 0.0

    @pytest.mark.parametrize("k", [3, 5, 10])
    def test_optimum_satisfies_constraint(self, k):
        assert abs(eta_of_alpha(alpha_opt(k), k) - eta_opt(k)) < 1e-12

    def test_two_blocks_through_singularity(self):
        # the denominator vanishes at alpha = pi/4; the continuous branch
        # still reaches the saddle value pi/(2 sqrt(2))
        assert abs(eta_of_alpha(PI4, 2) - math.pi / (2 * math.sqrt(2))) < 1e-12

    def test_out_of_range_alpha_rejected(self):
        with pytest.raises(DomainError):
            eta_of_alpha(1.0, 2)

    def test_constraint_consistency_grid(self):
        k = 2.0
        while k <= 100.0:
            assert abs(eta_of_alpha(alpha_opt(k), k) - eta_opt(k)) < 1e-10
            k += 0.5


class TestGrkCoefficient:
    @pytest.mark.parametrize(
        "k,expected",
        [(4, 0.61548), (6, 0.646015), (9, 0.671394)],
    )
    def test_reference_values(self, k, expected):
        assert abs(grk_coefficient(k) - expected) < 1e-5

    def test_below_full_search(self):
        for k in range(2, 65):
            assert grk_coefficient(k) < PI4

    def test_two_blocks_closed_form(self):
        # pi/4 + (pi/4 - pi/(2 sqrt 2))/sqrt(2) collapses to (pi/4)/sqrt(2)
        assert abs(grk_coefficient(2) - PI4 / math.sqrt(2)) < 1e-14

    def test_complement_comparison_reported(self, capsys):
        # checked but not asserted: at k = 2 the two strategies tie exactly
        ties_or_losses = []
        for k in range(2, 65):
            grk = grk_coefficient(k)
            comp = PI4 * math.sqrt((k - 1) / k)
            if not grk < comp:
                ties_or_losses.append((k, grk - comp))
        print(f"grk-vs-complement non-strict cases: {ties_or_losses}")


class TestSequentialCoefficient:
    def test_two_then_two(self):
        # evaluate the closed form directly; cross-checked against the
        # two-stage total read off the reference table
        expected = PI4 - PI4 / 2 + (PI4 - math.pi / (2 * math.sqrt(2))) / math.sqrt(2)
        value = sequential_coefficient(2, 2)
        assert abs(value - expected) < 1e-14
        total = grk_coefficient(2) + value / math.sqrt(2)
        assert abs(total - 0.670379) < 1e-5

    def test_large_previous_stage_limit(self):
        k = 5
        limit = PI4 - math.pi / 12 + (alpha_opt(k) - eta_opt(k)) / math.sqrt(k)
        assert abs(sequential_coefficient(1e9, k) - limit) < 1e-8

    def test_faster_than_first_stage(self):
        # the head start always saves alpha/2 per unit sqrt of database size
        for k in range(2, 17):
            assert sequential_coefficient(k, k) < grk_coefficient(k)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            sequential_coefficient(1, 4)


class TestHierarchyCoefficient:
    def test_two_stage_values(self):
        assert abs(hierarchy_coefficient((2, 2)) - 0.670379) < 1e-5
        assert abs(hierarchy_coefficient((2, 4)) - 0.712890) < 1e-5
        assert abs(hierarchy_coefficient((3, 2)) - 0.721158) < 1e-5

    def test_single_level_reduces_to_grk(self):
        for k in (2, 5, 12):
            assert abs(hierarchy_coefficient([k]) - grk_coefficient(k)) < 1e-14

    def test_two_stage_matches_explicit_sum(self):
        for k1, k2 in ((2, 3), (5, 4), (9, 2)):
            explicit = grk_coefficient(k1) + sequential_coefficient(k1, k2) / math.sqrt(k1)
            assert abs(hierarchy_coefficient((k1, k2)) - explicit) < 1e-14

    def test_empty_spec_rejected(self):
        with pytest.raises(DomainError):
            hierarchy_coefficient([])


class TestGap:
    def test_reference_gaps(self):
        assert abs(hierarchy_gap((2, 2)) - 0.054899) < 1e-5
        assert abs(hierarchy_gap((4, 2)) - 0.074769) < 1e-5

    def test_three_level_gap_positive(self):
        assert hierarchy_gap((2, 2, 2)) > 0

    def test_grid_positive(self):
        for k1 in range(2, 33):
            for k2 in range(2, 33):
                assert hierarchy_gap((k1, k2)) > 0

    def test_decomposition_sums_to_gap(self):
        rng = random.Random(5)
        for _ in range(50):
            levels = [rng.randint(2, 16) for _ in range(rng.randint(2, 6))]
            d = gap_decomposition(levels)
            assert abs(d.gap - (sum(d.lemma1_terms) + d.lemma2_term)) < 1e-12
            assert abs(d.gap - hierarchy_gap(levels)) < 1e-12

    def test_direct_coefficient_collapses_product(self):
        assert direct_coefficient((4, 2)) == grk_coefficient(8)


class TestNaive:
    def test_two_blocks_beats_full(self):
        worst = naive_queries(10**6, 2).worst
        assert abs(worst - PI4 * math.sqrt(10**6) / math.sqrt(2)) < 1e-9
        assert worst < PI4 * math.sqrt(10**6)

    def test_three_blocks_loses_to_full(self):
        assert naive_queries(10**6, 3).worst > PI4 * math.sqrt(10**6)

    def test_four_block_average_equals_full(self):
        assert abs(naive_queries(10**4, 4).average - PI4 * 100) < 1e-10


class TestBinary:
    def test_two_blocks_single_term(self):
        assert abs(binary_queries(256, 2) - PI4 * 16 / math.sqrt(2)) < 1e-12

    def test_four_blocks_exceeds_full(self):
        assert binary_queries(256, 4) > PI4 * 16

    def test_geometric_limit(self):
        # partial sums approach 1/(sqrt(2) - 1) from below
        limit = 1 / (math.sqrt(2) - 1)
        coef_20 = binary_queries(1, 2**20) / PI4
        coef_10 = binary_queries(1, 2**10) / PI4
        assert coef_10 < coef_20 < limit
        assert abs(coef_20 - limit) < 3e-3

    def test_non_power_of_two_rejected(self):
        with pytest.raises(DomainError):
            binary_queries(100, 6)


class TestComplement:
    def test_two_blocks(self):
        assert abs(complement_queries(64, 2) - PI4 * math.sqrt(32)) < 1e-12

    def test_always_beats_full(self):
        for k in range(2, 65):
            assert complement_queries(10**4, k) < PI4 * 100

    def test_five_blocks(self):
        assert abs(complement_queries(10**4, 5) - PI4 * 100 * math.sqrt(0.8)) < 1e-10


class TestScaledParams:
    def test_optimal(self):
        p = ScaledParams.optimal(4)
        assert p.alpha == alpha_opt(4)
        assert p.eta == eta_opt(4)
        p.validate()

    def test_from_schedule_round_trip(self):
        geom = DatabaseGeometry(n_items=10**6, n_blocks=4)
        schedule = IterationSchedule(
            j1=(math.pi / 4 - eta_opt(4) / 2) * 1000, j2=alpha_opt(4) * 500
        )
        p = ScaledParams.from_schedule(geom, schedule)
        assert abs(p.alpha - alpha_opt(4)) < 1e-12
        assert abs(p.eta - eta_opt(4)) < 1e-12
        assert p.is_physical()

    def test_unphysical_detected(self):
        p = ScaledParams(k=4, alpha=2.0, eta=0.1)
        assert not p.is_physical()
        with pytest.raises(DomainError):
            p.validate()
