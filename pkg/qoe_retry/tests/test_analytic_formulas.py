import pytest

from qoe_retry.analytic import (
    AnalyticParams,
    RetryPolicy,
    VideoModelParams,
    collision_for_loss_rate,
    compatibility_gap_algorithmic,
    compatibility_gap_lower_bound,
    compatibility_gap_original,
    expected_attempts,
    expected_attempts_series,
    expected_frozen_baseline,
    expected_frozen_proposed,
    expected_packets_baseline,
    expected_packets_proposed,
    frames_from_packets,
    frozen_bound,
    frozen_from_idr_count,
    frozen_interval_frames,
    frozen_interval_packet_counts,
    ipow,
    loss_rate,
    markov_frozen_bound,
    sufficient_condition_margin,
)
from qoe_retry.errors import NonConvergentParameterError, ParameterError

FOREMAN = VideoModelParams(d=10, d_prime=2, big_d=3)


class TestModels:
    def test_default_policy(self):
        policy = RetryPolicy()
        assert policy.as_tuple() == (8, 7, 1)
        assert policy.limit_for(1) == 8
        assert policy.limit_for(3) == 1

    @pytest.mark.parametrize("limits", [(7, 7, 1), (8, 7, 7), (8, 6, 1), (8, 7, 0)])
    def test_policy_rejects_bad_ordering(self, limits):
        r1, r2, r3 = limits
        with pytest.raises(ParameterError):
            RetryPolicy(r1=r1, r2=r2, r3=r3)

    def test_video_params_require_larger_idr(self):
        with pytest.raises(ParameterError):
            VideoModelParams(d=2, d_prime=2, big_d=3)
        assert FOREMAN.delta_d == 8
        assert FOREMAN.n_states == 16

    def test_analytic_params_derived_rates(self):
        params = AnalyticParams(p=0.35, p_tilde=0.4)
        assert params.p0 == pytest.approx(0.4**7)
        assert params.p1 < params.p2 < params.p3

    def test_analytic_params_reject_p_above_p_tilde(self):
        with pytest.raises(ParameterError):
            AnalyticParams(p=0.5, p_tilde=0.4)

    def test_ipow_matches_float_power(self):
        assert ipow(0.45, 7) == pytest.approx(0.45**7, rel=1e-12)
        assert ipow(0.0, 0) == 1.0


class TestExpectedAttempts:
    def test_no_collisions(self):
        assert expected_attempts(0.0, 7) == 1.0

    def test_two_attempts(self):
        assert expected_attempts(0.5, 2) == pytest.approx(1.5)

    def test_measured_collision_probability(self):
        assert expected_attempts(0.35, 7) == pytest.approx(1.537472, abs=1e-6)

    def test_closed_form_matches_series(self):
        worst = 0.0
        for step in range(20):
            p = step / 20
            for r in range(1, 13):
                worst = max(worst, abs(expected_attempts(p, r) - expected_attempts_series(p, r)))
        assert worst < 1e-12

    @pytest.mark.parametrize("p,r", [(-0.1, 3), (1.0, 3), (0.3, 0)])
    def test_rejects_invalid_input(self, p, r):
        with pytest.raises(ParameterError):
            expected_attempts(p, r)


class TestLossRate:
    def test_values(self):
        assert loss_rate(0.0, 7) == 0.0
        assert loss_rate(0.45, 7) == pytest.approx(0.003736, abs=1e-6)
        assert loss_rate(0.35, 8) == pytest.approx(2.2518e-4, rel=1e-4)

    def test_collision_for_loss_rate_inverts(self):
        assert collision_for_loss_rate(loss_rate(0.45, 7), 7) == pytest.approx(0.45)

    def test_scenario_loss_rates_map_to_plausible_contention(self):
        for loss in (0.0023, 0.0037, 0.0044, 0.0052, 0.0058):
            assert 0.4 < collision_for_loss_rate(loss, 7) < 0.5


class TestFrozenExpectations:
    def test_baseline(self):
        assert expected_frozen_baseline(0.0, 1000, 3) == 0.0
        assert expected_frozen_baseline(0.0037, 623, 3) == pytest.approx(6.9153)
        assert expected_frozen_baseline(0.01, 100, 1) == pytest.approx(1.0)

    def test_proposed(self):
        assert expected_frozen_proposed(0.0, 500, 0.0, 0, 3) == 0.0
        assert expected_frozen_proposed(0.001, 600, 0.003736, 0, 3) == pytest.approx(1.8)
        assert expected_frozen_proposed(0.01, 100, 0.02, 50, 2) == pytest.approx(4.0)

    def test_big_d_must_be_positive(self):
        with pytest.raises(ParameterError):
            expected_frozen_baseline(0.01, 100, 0)

    def test_frozen_interval_packet_counts(self):
        assert frozen_interval_packet_counts(0.0, FOREMAN) == (0.0, 10.0)
        n3, n_idr = frozen_interval_packet_counts(6.0, FOREMAN)
        assert n3 == pytest.approx(8.0)
        assert n_idr == pytest.approx(30.0)

    def test_frozen_interval_packet_counts_without_tail(self):
        n3, n_idr = frozen_interval_packet_counts(5.0, VideoModelParams(d=10, d_prime=2, big_d=1))
        assert n3 == 0.0
        assert n_idr == pytest.approx(60.0)

    def test_frozen_from_idr_count(self):
        assert frozen_from_idr_count(1, 3) == 0
        assert frozen_from_idr_count(4, 3) == 9
        with pytest.raises(ParameterError):
            frozen_from_idr_count(0, 3)


class TestPacketCounts:
    def test_lossless_baseline(self):
        assert expected_packets_baseline(295, FOREMAN, 0.0) == pytest.approx(598.0)
        assert expected_packets_baseline(1, FOREMAN, 0.0) == pytest.approx(10.0)

    def test_lossy_baseline_solves_defining_equation(self):
        n = expected_packets_baseline(295, FOREMAN, 0.005)
        assert n == pytest.approx(622.9167, abs=1e-3)
        idr_frames = 0.005 * n + 1
        assert n == pytest.approx(idr_frames * 10 + (295 - idr_frames) * 2)

    def test_non_convergent_parameters(self):
        params = VideoModelParams(d=20, d_prime=1, big_d=3)
        with pytest.raises(NonConvergentParameterError) as exc_info:
            expected_packets_baseline(295, params, 0.06)
        assert exc_info.value.product == pytest.approx(1.14)
        assert isinstance(exc_info.value, ValueError)

    def test_frames_from_packets_inverts_baseline(self):
        p0 = loss_rate(0.45, 7)
        n = expected_packets_baseline(295, FOREMAN, p0)
        assert frames_from_packets(n, FOREMAN, p0) == pytest.approx(295.0)

    def test_proposed_without_losses(self):
        assert expected_packets_proposed(295, FOREMAN, 0.0) == pytest.approx(598.0)

    def test_proposed_below_baseline(self):
        p = 0.45
        baseline = expected_packets_baseline(295, FOREMAN, loss_rate(p, 7))
        proposed = expected_packets_proposed(295, FOREMAN, loss_rate(p, 8))
        assert 598.0 < proposed < baseline


class TestFrozenIntervalFrames:
    @pytest.mark.parametrize(
        "delay_ms,fps,expected",
        [(100, 30, 3), (200, 30, 6), (400, 30, 12), (100, 60, 6), (10, 30, 1), (0, 30, 1)],
    )
    def test_values(self, delay_ms, fps, expected):
        assert frozen_interval_frames(delay_ms, fps) == expected

    def test_rejects_non_positive_fps(self):
        with pytest.raises(ParameterError):
            frozen_interval_frames(100, 0)


class TestSufficientCondition:
    def test_lossless_limit(self):
        assert sufficient_condition_margin(0.0, RetryPolicy(), FOREMAN) == pytest.approx(-1.0)

    def test_scenario_value(self):
        assert sufficient_condition_margin(0.45, RetryPolicy(), FOREMAN) == pytest.approx(0.2533, abs=1e-4)

    def test_no_tail(self):
        params = VideoModelParams(d=10, d_prime=2, big_d=1)
        assert sufficient_condition_margin(0.35, RetryPolicy(), params) == pytest.approx(-0.65)

    def test_nondecreasing_in_big_d_and_d_prime(self):
        policy = RetryPolicy()
        margins_d = [
            sufficient_condition_margin(0.4, policy, VideoModelParams(d=10, d_prime=2, big_d=big_d))
            for big_d in range(1, 8)
        ]
        margins_dp = [
            sufficient_condition_margin(0.4, policy, VideoModelParams(d=10, d_prime=dp, big_d=3))
            for dp in range(1, 6)
        ]
        assert margins_d == sorted(margins_d)
        assert margins_dp == sorted(margins_dp)


class TestCompatibilityGaps:
    def test_algorithmic_gap_zero_without_collisions(self):
        assert compatibility_gap_algorithmic(0.0, RetryPolicy(), 100, 10, 20) == pytest.approx(0.0)

    def test_algorithmic_gap_negative_for_priority1_only(self):
        assert compatibility_gap_algorithmic(0.35, RetryPolicy(), 100, 0, 0) < 0

    def test_lower_bound_sign_follows_margin(self):
        policy = RetryPolicy()
        assert compatibility_gap_lower_bound(0.45, policy, FOREMAN, 100) > 0
        assert compatibility_gap_lower_bound(0.1, policy, FOREMAN, 100) < 0

    def test_original_gap_with_equal_counts(self):
        gap = compatibility_gap_original(0.3, 0.3, RetryPolicy(), 100, 0, 100, 0)
        assert gap == pytest.approx(0.0)


class TestFrozenBound:
    def test_zero_frozen(self):
        assert frozen_bound(0.0, 0.001, 0.0001, FOREMAN) == 0.0

    def test_scenario_value(self):
        assert frozen_bound(100, 6.4339e-4, 2.2518e-4, FOREMAN) == pytest.approx(99.743, abs=1e-3)

    def test_direct_substitution(self):
        params = VideoModelParams(d=10, d_prime=2, big_d=4)
        expected = 10 / ((16 * 0.995 - 10) * 0.05 + 1)
        assert frozen_bound(10, 0.05, 0.01, params) == pytest.approx(expected)

    def test_strictly_below_baseline_when_lossy(self):
        assert frozen_bound(50, 0.004, 0.001, FOREMAN) < 50

    def test_rejects_p1_above_p0(self):
        with pytest.raises(ParameterError):
            frozen_bound(10, 0.001, 0.01, FOREMAN)

    def test_markov_bound_positive(self):
        assert markov_frozen_bound(600, FOREMAN, loss_rate(0.45, 8)) > 0
        assert markov_frozen_bound(600, FOREMAN, 0.0) == 0.0
