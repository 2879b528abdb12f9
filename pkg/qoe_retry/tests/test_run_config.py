import json

import pytest

from qoe_retry.errors import ConfigError
from qoe_retry.harness.config import (
    apply_overrides,
    build_run_config,
    load_run_config,
    parse_policy,
)
from qoe_retry.runtime_paths import get_scenario_path
from qoe_retry.video import SyntheticSizes, TraceSizes


class TestRunConfig:
    def test_defaults(self):
        config = build_run_config({})
        assert config.mode == "abstract"
        assert config.method == "proposed"
        assert config.collision_probability == 0.45
        assert config.big_d == 3
        assert config.retry_policy().as_tuple() == (8, 7, 1)
        assert isinstance(config.video.size_provider(), SyntheticSizes)

    def test_preset_fills_video_fields(self):
        config = build_run_config({"video": {"preset": "basketball"}})
        assert config.video.fps == 60.0
        assert config.video.n_frames == 300
        assert config.big_d == 6

    def test_explicit_field_beats_preset(self):
        config = build_run_config({"video": {"preset": "foreman", "n_frames": 40}})
        assert config.video.n_frames == 40
        assert config.video.fps == 30.0

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            build_run_config({"video": {"preset": "akiyo"}})

    def test_detection_delay_adds_to_rtt(self):
        config = build_run_config({"timing": {"rtt_ms": 100.0, "detection_delay_ms": 100.0}})
        assert config.timing.feedback_delay_ms == 200.0
        assert config.big_d == 6

    def test_invalid_policy(self):
        with pytest.raises(ConfigError):
            build_run_config({"policy": {"r1": 6, "r2": 7, "r3": 1, "r_base": 7}})

    def test_dcf_mode_needs_network(self):
        with pytest.raises(ConfigError, match="channel.dcf"):
            build_run_config({"mode": "dcf"})

    def test_dcf_mode_needs_one_video_station(self):
        stations = [{"role": "video"}, {"role": "video"}]
        with pytest.raises(ConfigError, match="exactly one video station"):
            build_run_config({"mode": "dcf", "channel": {"dcf": {"stations": stations}}})

    def test_sliding_window_needs_size(self):
        with pytest.raises(ConfigError):
            build_run_config({"window_mode": {"mode": "sliding"}})

    def test_with_method_and_seed(self):
        config = build_run_config({"seed": 3})
        assert config.with_method("baseline").method == "baseline"
        assert config.with_seed(9).seed == 9
        assert config.seed == 3

    def test_trace_source(self, tmp_path):
        trace = tmp_path / "trace.csv"
        trace.write_text("0,I,20000\n1,P,3000\n", encoding="utf-8")
        config = build_run_config({"video": {"trace": str(trace)}})
        assert isinstance(config.video.size_provider(), TraceSizes)


class TestLoadRunConfig:
    @pytest.mark.parametrize("name", ["scenario2", "basketball", "dcf_neutrality"])
    def test_bundled_scenarios(self, name):
        config = load_run_config(get_scenario_path(name))
        assert config.name == name

    def test_dcf_scenario_stations(self):
        config = load_run_config(get_scenario_path("dcf_neutrality"))
        roles = [station.role for station in config.channel.dcf.stations]
        assert roles == ["video"] + ["saturated"] * 10 + ["cbr", "cbr"]
        assert config.channel.dcf.video_station() == 0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "missing.json")

    def test_invalid_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"mode": "wireless"}), encoding="utf-8")
        with pytest.raises(ConfigError):
            load_run_config(path)


class TestOverrides:
    def test_p_clears_loss_rate(self):
        config = build_run_config({"channel": {"loss_rate": 0.004}})
        updated = apply_overrides(config, {"p": 0.3})
        assert updated.channel.loss_rate is None
        assert updated.collision_probability == 0.3

    def test_rtt(self):
        updated = apply_overrides(build_run_config({}), {"rtt_ms": 400.0})
        assert updated.big_d == 12

    def test_policy_moves_baseline_limit(self):
        updated = apply_overrides(build_run_config({}), {"policy": "9/6/2"})
        assert updated.retry_policy().as_tuple() == (9, 6, 2)
        assert updated.policy.r_base == 6

    def test_saturated_stations(self):
        config = load_run_config(get_scenario_path("dcf_neutrality"))
        updated = apply_overrides(config, {"saturated_stations": 4})
        roles = [station.role for station in updated.channel.dcf.stations]
        assert roles.count("saturated") == 4
        assert roles.count("video") == 1

    def test_saturated_stations_need_dcf(self):
        with pytest.raises(ConfigError):
            apply_overrides(build_run_config({}), {"saturated_stations": 2})

    def test_unknown_dimension(self):
        with pytest.raises(ConfigError, match="Unknown sweep dimension"):
            apply_overrides(build_run_config({}), {"cw_min": 31})


@pytest.mark.parametrize("value,expected", [("8,7,1", (8, 7, 1)), ("10/7/2", (10, 7, 2)), ([9, 7, 1], (9, 7, 1))])
def test_parse_policy(value, expected):
    assert parse_policy(value) == expected


@pytest.mark.parametrize("value", ["8,7", "a,b,c"])
def test_parse_policy_rejects(value):
    with pytest.raises(ConfigError):
        parse_policy(value)
