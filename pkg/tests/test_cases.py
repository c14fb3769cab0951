"""Builders for the demonstration cases and their verification routines."""

import math

import pytest

from conftest import sqrt_sum_table
from pandorabox import (
    ConcaveSumUtility,
    ConstructionError,
    PiecewiseLinear,
    SearchState,
    build_bernoulli_triple_case,
    build_concave_bernoulli_case,
    build_degenerate_triple_case,
    build_increment_dependence_case,
    fixed_order_expected_payoff,
    generalized_reservation,
    geometric_diminishing_table,
    optimal_expected_value,
    pandora_expected_value,
    search_order_weighted_counterexample,
    verify_bundle,
)
from pandorabox.documents import bundle_from_document, bundle_to_document


class TestDegenerateTriple:
    def test_default_numbers(self):
        bundle = build_degenerate_triple_case()
        verification = verify_bundle(bundle)
        assert verification.passed
        assert verification.gap == pytest.approx(0.1, abs=1e-12)
        rule = pandora_expected_value(bundle.instance, bundle.tie_break)
        assert rule.expected_payoff == pytest.approx(1.4, abs=1e-12)
        assert optimal_expected_value(bundle.instance).expected_payoff == pytest.approx(1.5, abs=1e-12)

    def test_initial_reservations_all_infinite(self):
        bundle = build_degenerate_triple_case()
        state = SearchState.initial(bundle.instance)
        assert all(generalized_reservation(state, i).is_infinite for i in (1, 2, 3))

    def test_friendly_tie_break_is_optimal(self):
        from pandorabox import TieBreak, policy_gap

        bundle = build_degenerate_triple_case()
        assert policy_gap(bundle.instance, TieBreak((1, 2, 3))) == pytest.approx(0.0, abs=1e-12)

    def test_boundary_cost_warns_and_gap_degenerates(self):
        with pytest.warns(UserWarning):
            bundle = build_degenerate_triple_case(c2=0.5)
        assert bundle.expected_gap == pytest.approx(0.0, abs=1e-12)
        verification = verify_bundle(bundle)
        assert verification.gap == pytest.approx(0.0, abs=1e-12)

    def test_cost_chain_violations_rejected(self):
        with pytest.raises(ConstructionError):
            build_degenerate_triple_case(c1=0.55)  # c1 must stay below w3 * x0
        with pytest.raises(ConstructionError):
            build_degenerate_triple_case(c2=0.9)  # c2 must stay below w2 * x0
        with pytest.raises(ConstructionError):
            build_degenerate_triple_case(w2=0.5, w3=0.5)  # levels must separate


class TestBernoulliTriple:
    def test_enumerator_matches_the_nested_expansion(self):
        bundle = build_bernoulli_triple_case()
        f1, f2 = 1.0, 0.8
        p, c = (0.5, 0.5, 0.5), (0.1, 0.2, 0.3)
        for (i, j, k) in ((1, 2, 3), (3, 2, 1), (2, 1, 3)):
            ci, cj, ck = c[i - 1], c[j - 1], c[k - 1]
            pi, pj, pk = p[i - 1], p[j - 1], p[k - 1]
            qi, qj = 1 - pi, 1 - pj
            nested = (
                -ci
                + pi * (f1 - cj + pj * f2 + qj * (-ck + pk * f2))
                + qi * (-cj + pj * (f1 - ck + pk * f2) + qj * (-ck + pk * f1))
            )
            got = fixed_order_expected_payoff(bundle.instance, (i, j, k), 1.0)
            assert got == pytest.approx(nested, abs=1e-12)

    def test_default_order_difference(self):
        bundle = build_bernoulli_triple_case()
        first = fixed_order_expected_payoff(bundle.instance, (1, 2, 3), 1.0)
        last = fixed_order_expected_payoff(bundle.instance, (3, 2, 1), 1.0)
        assert first == pytest.approx(0.75, abs=1e-12)
        assert last == pytest.approx(0.70, abs=1e-12)
        assert first - last == pytest.approx(0.05, abs=1e-12)

    def test_verification_passes_and_gap_positive(self):
        bundle = build_bernoulli_triple_case()
        verification = verify_bundle(bundle)
        assert verification.passed
        assert verification.gap == pytest.approx(0.025, abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ConstructionError):
            build_bernoulli_triple_case(costs=(0.1, 0.1, 0.3))  # tied ratios
        with pytest.raises(ConstructionError):
            build_bernoulli_triple_case(costs=(0.1, 0.2, 0.45))  # ratio reaches w2 * x0
        with pytest.raises(ConstructionError):
            build_bernoulli_triple_case(probabilities=(0.5, 1.0, 0.5))


class TestIncrementDependence:
    def test_default_sqrt_construction(self):
        utility = ConcaveSumUtility(sqrt_sum_table(5))
        bundle = build_increment_dependence_case(utility, 1.0, 1.0, 2.0, 0.05)
        costs = [box.cost for box in bundle.instance.boxes]
        assert costs[0] == pytest.approx(math.sqrt(2) - 1 - 0.05, abs=1e-12)
        assert costs[1] == pytest.approx(math.sqrt(3) - 1, abs=1e-12)
        assert costs[2] == 1.0  # the inert stay-closed box
        expected_slack = (math.sqrt(2) - 1) - (math.sqrt(3) - math.sqrt(2)) - 0.05
        assert bundle.expected_gap == pytest.approx(expected_slack, abs=1e-12)
        verification = verify_bundle(bundle)
        assert verification.passed
        assert verification.gap == pytest.approx(expected_slack, abs=1e-9)

    def test_oversized_margin_rejected(self):
        utility = ConcaveSumUtility(sqrt_sum_table(5))
        with pytest.raises(ConstructionError):
            build_increment_dependence_case(utility, 1.0, 1.0, 2.0, 0.2)

    def test_misordered_points_rejected(self):
        utility = ConcaveSumUtility(sqrt_sum_table(5))
        with pytest.raises(ConstructionError):
            build_increment_dependence_case(utility, 1.0, 2.0, 1.0, 0.05)


class TestConcaveBernoulli:
    def test_default_bundle_verifies(self):
        bundle = build_concave_bernoulli_case(geometric_diminishing_table(4))
        verification = verify_bundle(bundle)
        assert verification.passed
        assert verification.gap == pytest.approx(0.0, abs=1e-9)
        rule = pandora_expected_value(bundle.instance, bundle.tie_break)
        assert rule.expected_payoff == pytest.approx(0.625, abs=1e-12)

    def test_ids_assigned_in_ratio_order(self):
        bundle = build_concave_bernoulli_case(
            geometric_diminishing_table(4),
            boxes=((0.3, 0.5), (0.1, 0.5), (0.2, 0.5)),
        )
        ratios = [b.cost / dict(b.dist.atoms)[1.0] for b in bundle.instance.boxes]
        assert ratios == sorted(ratios)

    def test_linear_transform_reduces_to_independent_accept_reject(self):
        # With a linear table every marginal gain is 1, so each box is
        # worth opening exactly when cost < success probability, no matter
        # what happened elsewhere.
        psi = PiecewiseLinear(tuple((float(k), float(k)) for k in range(6)))
        boxes = ((0.2, 0.5), (0.9, 0.6), (0.3, 0.8), (0.7, 0.4))
        bundle = build_concave_bernoulli_case(psi, boxes)
        rule = pandora_expected_value(bundle.instance, bundle.tie_break)
        expected = sum(p - c for c, p in boxes if c < p)
        assert rule.expected_payoff == pytest.approx(expected, abs=1e-12)
        from pandorabox import policy_gap

        assert policy_gap(bundle.instance, bundle.tie_break) == pytest.approx(0.0, abs=1e-9)

    def test_construction_validation(self):
        with pytest.raises(ConstructionError):
            build_concave_bernoulli_case(geometric_diminishing_table(2))  # short table
        from pandorabox import ValidationError

        with pytest.raises(ValidationError):
            build_concave_bernoulli_case(
                PiecewiseLinear(((0.0, 0.0), (1.0, 1.0), (2.0, 2.5), (3.0, 3.0), (4.0, 3.1)))
            )  # convex kink


class TestCounterexampleSearch:
    def test_separated_weights_find_a_witness(self):
        bundle = search_order_weighted_counterexample(0.8, 0.5, seed=0, budget=400)
        assert bundle is not None
        verification = verify_bundle(bundle)
        assert verification.passed
        assert verification.gap > 1e-6

    def test_search_is_deterministic(self):
        a = search_order_weighted_counterexample(0.8, 0.5, seed=0, budget=400)
        b = search_order_weighted_counterexample(0.8, 0.5, seed=0, budget=400)
        assert bundle_to_document(a) == bundle_to_document(b)

    def test_equal_weights_come_back_clean(self):
        assert search_order_weighted_counterexample(0.7, 0.7, seed=3, budget=40) is None

    def test_zero_budget_finds_nothing(self):
        assert search_order_weighted_counterexample(0.8, 0.5, seed=0, budget=0) is None

    def test_rejects_rising_weights(self):
        with pytest.raises(ConstructionError):
            search_order_weighted_counterexample(0.5, 0.8)


class TestBundleRoundTrip:
    def test_bundles_survive_serialization_and_reverify(self):
        for bundle in (
            build_degenerate_triple_case(),
            build_bernoulli_triple_case(),
            build_concave_bernoulli_case(geometric_diminishing_table(4)),
        ):
            doc = bundle_to_document(bundle)
            again = bundle_from_document(doc)
            assert again.label == bundle.label
            assert again.instance == bundle.instance
            assert verify_bundle(again).passed

    def test_unknown_label_rejected(self):
        bundle = build_degenerate_triple_case()
        broken = type(bundle)(
            label="mystery",
            instance=bundle.instance,
            tie_break=bundle.tie_break,
            expected_gap=0.0,
        )
        with pytest.raises(ConstructionError):
            verify_bundle(broken)
