"""
Closed-loop video session.

Each frame period the encoder emits a frame (IDR when a loss report has
armed it), the scheduler classifies it, its packets go through the
channel, MAC outcomes return to the scheduler and the receiver decides
whether the frame is displayed fresh or frozen. Every lost frame sends a
loss report that reaches the encoder one feedback delay later.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..channel import BernoulliChannel, DcfSimulator
from ..scheduler import Priority, RetryScheduler, make_scheduler
from ..video import FeedbackEvent, FrozenStats, VideoEncoder, VideoReceiver, packetize
from .config import RunConfig

logger = logging.getLogger("qoe-retry.session")


@dataclass(slots=True)
class StationRow:
    station: int
    role: str
    delivered_bytes: int
    throughput_Bps: float
    attempts: int
    collisions: int
    drops: int
    queue_drops: int


@dataclass(slots=True)
class RunMetrics:
    name: str
    mode: str
    method: str
    seed: int
    frozen: FrozenStats
    packets_by_priority: tuple[int, int, int]
    frames_by_priority: tuple[int, int, int]
    attempts_total: int
    collisions_total: int
    drops_total: int
    measured_p: float
    idr_frames_generated: int
    suppressed_feedback: int
    big_d: int
    idr_packets: int
    p_packets: int
    queue_drops: int = 0
    backlog_packets: int = 0
    stations: list[StationRow] = field(default_factory=list)
    video_delays_ms: list[float] = field(default_factory=list)

    @property
    def packets_total(self) -> int:
        return sum(self.packets_by_priority)

    @property
    def drop_rate(self) -> float:
        return self.drops_total / self.packets_total if self.packets_total else 0.0

    @property
    def d_hat(self) -> float:
        """Mean packets per IDR frame."""
        return self.idr_packets / self.idr_frames_generated if self.idr_frames_generated else 0.0

    @property
    def d_prime_hat(self) -> float:
        p_frames = self.frozen.total - self.idr_frames_generated
        return self.p_packets / p_frames if p_frames > 0 else 0.0


@dataclass(slots=True)
class _Tally:
    packets: list[int] = field(default_factory=lambda: [0, 0, 0])
    frames: list[int] = field(default_factory=lambda: [0, 0, 0])
    attempts: int = 0
    collisions: int = 0
    drops: int = 0
    idr_packets: int = 0
    p_packets: int = 0

    def frame(self, priority: Priority, packets: int, is_idr: bool) -> None:
        self.frames[priority - 1] += 1
        self.packets[priority - 1] += packets
        if is_idr:
            self.idr_packets += packets
        else:
            self.p_packets += packets

    def outcome(self, attempts: int, delivered: bool) -> None:
        self.attempts += attempts
        self.collisions += attempts - 1 if delivered else attempts
        if not delivered:
            self.drops += 1


def run_session(config: RunConfig) -> RunMetrics:
    """
    Run one seeded session and return its metrics.

    Deterministic given the config, seed included.
    """
    if config.mode == "dcf":
        return _run_dcf(config)
    return _run_abstract(config)


def _build(config: RunConfig) -> tuple[VideoEncoder, RetryScheduler, VideoReceiver]:
    encoder = VideoEncoder(config.video.size_provider(), config.video.mtu_payload)
    scheduler = make_scheduler(config.method, config.retry_policy(), config.window_mode.to_window_mode())
    return encoder, scheduler, VideoReceiver()


def _maybe_reset(config: RunConfig, scheduler: RetryScheduler, index: int) -> None:
    interval = config.reset_interval_frames
    if interval and index > 0 and index % interval == 0:
        scheduler.reset_window()


def _run_abstract(config: RunConfig) -> RunMetrics:
    encoder, scheduler, receiver = _build(config)
    channel = BernoulliChannel(config.collision_probability, np.random.default_rng(config.seed))
    big_d = config.big_d
    fps = config.video.fps
    delay_s = config.timing.feedback_delay_ms / 1000.0
    feedback: deque[FeedbackEvent] = deque()
    tally = _Tally()

    for index in range(config.video.n_frames):
        _maybe_reset(config, scheduler, index)
        while feedback and feedback[0].delivery_frame <= index:
            encoder.on_feedback(feedback.popleft().lost_frame_index)

        frame = encoder.next_frame()
        priority = scheduler.classify_frame(frame.is_idr)
        packets = packetize(frame, config.video.mtu_payload)
        tally.frame(priority, len(packets), frame.is_idr)

        all_delivered = True
        for _ in packets:
            limit = scheduler.register_packet(priority)
            result = channel.transmit(limit, now=index / fps)
            scheduler.record_transmission_result(result.attempts, result.delivered, limit)
            tally.outcome(result.attempts, result.delivered)
            all_delivered = all_delivered and result.delivered

        receiver.ingest(index, frame.is_idr, all_delivered)
        if not all_delivered:
            feedback.append(
                FeedbackEvent(
                    lost_frame_index=index,
                    delivery_time=index / fps + delay_s,
                    delivery_frame=index + big_d,
                )
            )

    return _metrics(config, encoder, receiver, tally, big_d, measured_p=channel.measured_p)


def _run_dcf(config: RunConfig) -> RunMetrics:
    dcf_config = config.channel.dcf
    encoder, scheduler, receiver = _build(config)
    sim = DcfSimulator(dcf_config, config.seed)
    video = dcf_config.video_station()
    n_frames = config.video.n_frames
    frame_slots = dcf_config.ms_to_slots(1000.0 / config.video.fps)
    delay_slots = dcf_config.ms_to_slots(config.timing.feedback_delay_ms)

    remaining = [0] * n_frames
    intact = [True] * n_frames
    idr_flags = [False] * n_frames
    feedback: deque[FeedbackEvent] = deque()
    tally = _Tally()

    def report_loss(frame_index: int, loss_slot: float) -> None:
        arrival = loss_slot + delay_slots
        feedback.append(
            FeedbackEvent(
                lost_frame_index=frame_index,
                delivery_time=arrival,
                delivery_frame=math.ceil(arrival / frame_slots),
            )
        )

    def process_outcomes() -> None:
        for outcome in sim.drain_results(video):
            frame_index, limit = outcome.packet.tag
            result = outcome.result
            scheduler.record_transmission_result(result.attempts, result.delivered, limit)
            tally.outcome(result.attempts, result.delivered)
            remaining[frame_index] -= 1
            if not result.delivered and intact[frame_index]:
                intact[frame_index] = False
                report_loss(frame_index, result.completion_time)

    for index in range(n_frames):
        sim.run_until(round(index * frame_slots))
        process_outcomes()
        _maybe_reset(config, scheduler, index)
        while feedback and feedback[0].delivery_frame <= index:
            encoder.on_feedback(feedback.popleft().lost_frame_index)

        frame = encoder.next_frame()
        idr_flags[index] = frame.is_idr
        priority = scheduler.classify_frame(frame.is_idr)
        packets = packetize(frame, config.video.mtu_payload)
        tally.frame(priority, len(packets), frame.is_idr)
        for packet in packets:
            limit = scheduler.register_packet(priority)
            if sim.submit(video, packet.size, limit, tag=(index, limit)):
                remaining[index] += 1
            elif intact[index]:
                intact[index] = False
                report_loss(index, sim.clock)

    end_of_video = round(n_frames * frame_slots)
    deadline = end_of_video + round(dcf_config.ms_to_slots(config.drain_cap_ms))
    horizon = end_of_video
    while True:
        sim.run_until(horizon)
        process_outcomes()
        if sim.backlog(video) == 0 or horizon >= deadline:
            break
        horizon = min(deadline, horizon + round(frame_slots))
    backlog = sim.backlog(video)
    if backlog:
        logger.warning(f"Seed {config.seed}: {backlog} video packets still queued after the drain window")

    for index in range(n_frames):
        delivered = intact[index] and remaining[index] == 0
        receiver.ingest(index, idr_flags[index], delivered)

    dcf_metrics = sim.metrics()
    stations = [
        StationRow(
            station=station.station,
            role=station.role,
            delivered_bytes=station.delivered_bytes,
            throughput_Bps=dcf_metrics.throughput_Bps(station.station),
            attempts=station.attempts,
            collisions=station.collisions,
            drops=station.drops,
            queue_drops=station.queue_drops,
        )
        for station in dcf_metrics.stations
    ]
    video_metrics = dcf_metrics.stations[video]
    slot_ms = dcf_config.slot_time_us / 1000.0
    metrics = _metrics(config, encoder, receiver, tally, config.big_d, measured_p=video_metrics.measured_p)
    metrics.queue_drops = video_metrics.queue_drops
    metrics.backlog_packets = backlog
    metrics.stations = stations
    metrics.video_delays_ms = [delay * slot_ms for delay in video_metrics.delays]
    return metrics


def _metrics(
    config: RunConfig,
    encoder: VideoEncoder,
    receiver: VideoReceiver,
    tally: _Tally,
    big_d: int,
    measured_p: float,
) -> RunMetrics:
    stats = receiver.stats()
    logger.debug(
        f"{config.name} {config.method} seed={config.seed}: "
        f"frozen {stats.frozen}/{stats.total}, drops {tally.drops}"
    )
    return RunMetrics(
        name=config.name,
        mode=config.mode,
        method=config.method,
        seed=config.seed,
        frozen=stats,
        packets_by_priority=tuple(tally.packets),
        frames_by_priority=tuple(tally.frames),
        attempts_total=tally.attempts,
        collisions_total=tally.collisions,
        drops_total=tally.drops,
        measured_p=measured_p,
        idr_frames_generated=encoder.state.idr_frames,
        suppressed_feedback=encoder.state.suppressed_feedback,
        big_d=big_d,
        idr_packets=tally.idr_packets,
        p_packets=tally.p_packets,
    )
