import pytest
from pydantic import ValidationError

from qoe_retry.analytic import bianchi_fixed_point
from qoe_retry.channel import DcfConfig, DcfSimulator, StationSpec, dcf_new, is_window_bound
from qoe_retry.errors import ParameterError, UnknownStationError


def _config(*roles: str, **kwargs) -> DcfConfig:
    return DcfConfig(stations=[StationSpec(role=role) for role in roles], **kwargs)


class TestDcfConfig:
    def test_defaults(self):
        config = _config("video")
        assert config.tx_slots(2304) == 172
        assert config.max_backoff_stages == 6
        assert config.bytes_per_slot == pytest.approx(14.625)
        assert config.ms_to_slots(9.0) == pytest.approx(1000.0)
        assert config.video_station() == 0

    @pytest.mark.parametrize("cw_min", [0, 14, 16])
    def test_rejects_non_power_window(self, cw_min):
        with pytest.raises(ValidationError):
            _config("video", cw_min=cw_min)

    def test_rejects_inverted_windows(self):
        with pytest.raises(ValidationError):
            _config("video", cw_min=31, cw_max=15)

    def test_station_arrival_parameters(self):
        with pytest.raises(ValidationError):
            StationSpec(role="poisson")
        with pytest.raises(ValidationError):
            StationSpec(role="cbr", interval_ms=0)
        assert StationSpec(role="cbr", interval_ms=20).interval_ms == 20

    def test_window_bound(self):
        assert is_window_bound(1)
        assert is_window_bound(1023)
        assert not is_window_bound(1000)

    def test_no_video_station(self):
        with pytest.raises(ValueError):
            _config("saturated").video_station()


class TestSubmit:
    def test_single_station_delivers_first_attempt(self):
        sim = dcf_new(_config("video"), seed=5)
        assert sim.submit(0, 2304, 7, tag="a")
        metrics = sim.run_until(2000)
        outcomes = sim.drain_results(0)
        assert len(outcomes) == 1
        outcome = outcomes[0]
        assert outcome.packet.tag == "a"
        assert outcome.result.delivered
        assert outcome.result.attempts == 1
        assert 172 <= outcome.result.completion_time <= 172 + 15
        assert metrics.stations[0].delivered_bytes == 2304
        assert sim.drain_results(0) == []

    def test_queue_limit(self):
        sim = DcfSimulator(_config("video", queue_limit=2), seed=0)
        assert [sim.submit(0, 100, 7) for _ in range(3)] == [True, True, False]
        assert sim.backlog(0) == 2
        assert sim.metrics().stations[0].queue_drops == 1

    def test_unknown_station(self):
        sim = DcfSimulator(_config("video"), seed=0)
        with pytest.raises(UnknownStationError):
            sim.submit(3, 100, 7)
        with pytest.raises(KeyError):
            sim.backlog(-1)

    def test_rejects_invalid_packets(self):
        sim = DcfSimulator(_config("video"), seed=0)
        with pytest.raises(ParameterError):
            sim.submit(0, 0, 7)
        with pytest.raises(ParameterError):
            sim.submit(0, 100, 0)

    def test_clock_cannot_go_back(self):
        sim = DcfSimulator(_config("video"), seed=0)
        sim.run_until(100)
        with pytest.raises(ParameterError):
            sim.run_until(50)


class TestContention:
    def test_lone_saturated_station_never_collides(self):
        metrics = DcfSimulator(_config("saturated"), seed=1).run_until(200_000)
        assert metrics.attempts > 0
        assert metrics.collisions == 0
        assert metrics.measured_p == 0.0

    def test_simultaneous_transmitters_collide(self):
        sim = DcfSimulator(_config("saturated", "saturated"), seed=2, record_events=True)
        for station in sim.stations:
            station.backoff = 0
        sim.run_until(1)
        start, transmitters, success = sim.events[0]
        assert start == 0
        assert transmitters == (0, 1)
        assert success is False
        assert all(station.cw == 31 for station in sim.stations)

    def test_retry_limit_drops_packet(self):
        config = DcfConfig(stations=[StationSpec(role="video"), StationSpec(role="video")])
        sim = DcfSimulator(config, seed=3)
        sim.submit(0, 100, 1)
        sim.submit(1, 100, 1)
        for station in sim.stations:
            station.backoff = 0
        sim.run_until(100)
        for station in (0, 1):
            (outcome,) = sim.drain_results(station)
            assert not outcome.result.delivered
            assert outcome.result.attempts == 1
        assert sim.metrics().stations[0].drops == 1
        assert all(station.cw == 15 for station in sim.stations)

    def test_same_seed_same_events(self):
        config = _config("saturated", "saturated", "saturated")
        first = DcfSimulator(config, seed=9, record_events=True)
        second = DcfSimulator(config, seed=9, record_events=True)
        first.run_until(100_000)
        second.run_until(100_000)
        assert first.events == second.events
        assert first.metrics().stations == second.metrics().stations

    def test_collision_rate_near_fixed_point(self):
        config = _config(*["saturated"] * 5)
        metrics = DcfSimulator(config, seed=4).run_until(1_000_000)
        _, predicted = bianchi_fixed_point(5, config.cw_min + 1, config.max_backoff_stages, 7)
        assert metrics.measured_p == pytest.approx(predicted, rel=0.10)


class TestTraffic:
    def test_cbr_message_split_into_msdus(self):
        config = DcfConfig(stations=[StationSpec(role="cbr", packet_bytes=5000, interval_ms=10.0)])
        sim = DcfSimulator(config, seed=0)
        sim.stations[0].next_arrival = 0.0
        sim.run_until(0)
        assert [packet.size for packet in sim.stations[0].queue] == [2304, 2304, 392]

    def test_poisson_rate(self):
        config = DcfConfig(stations=[StationSpec(role="poisson", rate_pps=100.0, packet_bytes=500)])
        metrics = DcfSimulator(config, seed=6).run_until(round(config.ms_to_slots(1000.0)))
        assert 60 < metrics.stations[0].delivered_packets < 140
        assert metrics.elapsed_seconds == pytest.approx(1.0, abs=0.01)
        assert metrics.throughput_Bps(0) == pytest.approx(metrics.stations[0].delivered_bytes / metrics.elapsed_seconds)

    def test_video_delays_recorded(self):
        sim = DcfSimulator(_config("video", "saturated"), seed=8)
        for _ in range(5):
            sim.submit(0, 2304, 7)
        metrics = sim.run_until(20_000)
        video = metrics.stations[0]
        assert video.delivered_packets + video.drops == 5
        assert len(video.delays) == video.delivered_packets
        assert all(delay >= 172 for delay in video.delays)
