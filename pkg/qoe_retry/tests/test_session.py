import pytest

from qoe_retry.harness.config import build_run_config
from qoe_retry.harness.session import run_session


def _abstract(**overrides):
    data = {
        "name": "unit",
        "mode": "abstract",
        "method": "proposed",
        "video": {"preset": "foreman"},
        "timing": {"rtt_ms": 100.0},
        "channel": {"p": 0.45},
    }
    data.update(overrides)
    return build_run_config(data)


def _dcf(**overrides):
    data = {
        "name": "unit-dcf",
        "mode": "dcf",
        "method": "proposed",
        "video": {"preset": "foreman", "n_frames": 30},
        "timing": {"rtt_ms": 100.0},
        "channel": {
            "p": None,
            "dcf": {"stations": [{"role": "video"}, {"role": "saturated"}]},
        },
    }
    data.update(overrides)
    return build_run_config(data)


class TestAbstractSession:
    def test_lossless_proposed_uses_priority_one(self):
        metrics = run_session(_abstract(channel={"p": 0.0}))
        assert metrics.frozen.frozen == 0
        assert metrics.frozen.total == 295
        assert metrics.frames_by_priority == (295, 0, 0)
        assert metrics.packets_by_priority == (598, 0, 0)
        assert metrics.idr_frames_generated == 1
        assert metrics.drops_total == 0
        assert metrics.d_hat == 10
        assert metrics.d_prime_hat == 2

    def test_lossless_baseline_uses_priority_two(self):
        metrics = run_session(_abstract(method="baseline", channel={"p": 0.0}))
        assert metrics.frames_by_priority == (0, 295, 0)
        assert metrics.attempts_total == 598

    def test_certain_loss_freezes_everything(self):
        metrics = run_session(_abstract(method="baseline", channel={"p": 1.0}))
        assert metrics.frozen.frozen == metrics.frozen.total
        assert metrics.drops_total == metrics.packets_total

    @pytest.mark.parametrize("method", ["baseline", "proposed"])
    def test_frozen_intervals_last_one_feedback_delay(self, method):
        for seed in range(5):
            metrics = run_session(_abstract(method=method, seed=seed))
            intervals = metrics.frozen.intervals
            assert metrics.big_d == 3
            assert sum(intervals) == metrics.frozen.frozen
            assert all(length == 3 for length in intervals[:-1])
            if intervals:
                assert intervals[-1] <= 3

    def test_longer_delay_longer_intervals(self):
        metrics = run_session(_abstract(method="baseline", timing={"rtt_ms": 400.0}, seed=2))
        assert metrics.big_d == 12
        assert all(length == 12 for length in metrics.frozen.intervals[:-1])

    def test_same_seed_same_metrics(self):
        config = _abstract(seed=17)
        assert run_session(config) == run_session(config)

    def test_priority_three_follows_losses(self):
        metrics = run_session(_abstract(channel={"p": 0.6}, seed=1))
        assert metrics.drops_total > 0
        assert metrics.frames_by_priority[2] > 0

    def test_loss_rate_configuration(self):
        config = _abstract(channel={"loss_rate": 0.0037})
        assert config.collision_probability == pytest.approx(0.0037 ** (1 / 7))
        assert run_session(config).frozen.total == 295

    def test_reset_interval(self):
        metrics = run_session(_abstract(reset_interval_frames=30, seed=3))
        assert metrics.frozen.total == 295

    def test_sliding_window(self):
        metrics = run_session(_abstract(window_mode={"mode": "sliding", "window_packets": 200}, seed=3))
        assert metrics.frozen.total == 295


class TestDcfSession:
    def test_runs_all_frames(self):
        metrics = run_session(_dcf())
        assert metrics.mode == "dcf"
        assert metrics.frozen.total == 30
        assert sum(metrics.frames_by_priority) == 30
        assert len(metrics.stations) == 2
        assert metrics.stations[1].role == "saturated"
        assert metrics.stations[1].throughput_Bps > 0
        assert len(metrics.video_delays_ms) > 0
        assert all(delay > 0 for delay in metrics.video_delays_ms)

    def test_same_seed_same_metrics(self):
        config = _dcf(seed=4)
        assert run_session(config) == run_session(config)

    def test_baseline_video_uses_default_limit(self):
        metrics = run_session(_dcf(method="baseline"))
        assert metrics.frames_by_priority == (0, 30, 0)
        assert 0.0 <= metrics.measured_p <= 1.0
