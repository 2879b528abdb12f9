"""
Slotted 802.11 DCF simulator.

Time is counted in slots. Every contention slot, idle or busy, decrements
the backoff counter of each backlogged station that is not transmitting;
stations whose counter is zero transmit. A single transmitter succeeds,
two or more collide. Idle stretches are skipped in one step up to the
next transmission or traffic arrival.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ParameterError, UnknownStationError
from .models import DcfConfig, DcfMetrics, DcfPacket, PacketOutcome, StationMetrics, StationSpec, TxResult

logger = logging.getLogger("qoe-retry.dcf")

SlotEvent = tuple[int, tuple[int, ...], bool]


@dataclass(slots=True)
class _Station:
    index: int
    spec: StationSpec
    cw: int
    queue: deque[DcfPacket] = field(default_factory=deque)
    backoff: int | None = None
    next_arrival: float = math.inf
    results: list[PacketOutcome] = field(default_factory=list)
    metrics: StationMetrics | None = None


class DcfSimulator:
    def __init__(self, config: DcfConfig, seed: int, record_events: bool = False):
        self.config = config
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.clock = 0
        self.events: list[SlotEvent] | None = [] if record_events else None
        self.stations: list[_Station] = []
        for index, spec in enumerate(config.stations):
            station = _Station(index=index, spec=spec, cw=config.cw_min)
            station.metrics = StationMetrics(station=index, role=spec.role)
            if spec.role == "poisson":
                station.next_arrival = self._poisson_gap(spec)
            elif spec.role == "cbr":
                station.next_arrival = float(self.rng.uniform(0.0, config.ms_to_slots(spec.interval_ms)))
            self.stations.append(station)
        logger.debug(f"DCF network with {len(self.stations)} stations, seed={seed}")

    def submit(self, station: int, size: int, retry_limit: int, tag: Any = None) -> bool:
        """Append a packet to a station's FIFO; False when the queue is full."""
        owner = self._station(station)
        if size <= 0:
            raise ParameterError(f"packet size must be positive, got {size}")
        if retry_limit < 1:
            raise ParameterError(f"retry_limit must be >= 1, got {retry_limit}")
        return self._enqueue(owner, size, retry_limit, tag)

    def backlog(self, station: int) -> int:
        return len(self._station(station).queue)

    def drain_results(self, station: int) -> list[PacketOutcome]:
        owner = self._station(station)
        results, owner.results = owner.results, []
        return results

    def metrics(self) -> DcfMetrics:
        return DcfMetrics(
            stations=[station.metrics for station in self.stations],
            clock=self.clock,
            slot_time_us=self.config.slot_time_us,
        )

    def run_until(self, t_end: int) -> DcfMetrics:
        """
        Advance the network to slot t_end.

        A transmission that starts before t_end runs to completion, so the
        clock may stop slightly past t_end.
        """
        if t_end < self.clock:
            raise ParameterError(f"t_end={t_end} is before the current clock {self.clock}")

        while True:
            self._materialize_arrivals()
            if self.clock >= t_end:
                break

            backlogged = [station for station in self.stations if self._head(station) is not None]
            next_arrival = min((station.next_arrival for station in self.stations), default=math.inf)
            horizon_end = t_end if math.isinf(next_arrival) else min(t_end, math.ceil(next_arrival))
            if not backlogged:
                self.clock = horizon_end
                continue

            for station in backlogged:
                if station.backoff is None:
                    station.backoff = self._draw_backoff(station.cw)

            idle = min(station.backoff for station in backlogged)
            horizon = horizon_end - self.clock
            if idle >= horizon:
                for station in backlogged:
                    station.backoff -= horizon
                self.clock = horizon_end
                continue

            for station in backlogged:
                station.backoff -= idle
            self.clock += idle
            self._contend(backlogged)

        return self.metrics()

    def _contend(self, backlogged: list[_Station]) -> None:
        transmitters = [station for station in backlogged if station.backoff == 0]
        for station in backlogged:
            if station.backoff > 0:
                station.backoff -= 1

        config = self.config
        start = self.clock
        duration = max(config.tx_slots(station.queue[0].size) for station in transmitters)
        completion = start + duration
        success = len(transmitters) == 1
        for station in transmitters:
            packet = station.queue[0]
            packet.attempts += 1
            station.metrics.attempts += 1
            if success:
                self._finish(station, delivered=True, completion=completion)
                continue
            station.metrics.collisions += 1
            if packet.attempts >= packet.retry_limit:
                self._finish(station, delivered=False, completion=completion)
            else:
                station.cw = min(2 * (station.cw + 1) - 1, config.cw_max)
                station.backoff = self._draw_backoff(station.cw)

        if self.events is not None:
            self.events.append((start, tuple(station.index for station in transmitters), success))
        self.clock = completion

    def _finish(self, station: _Station, delivered: bool, completion: int) -> None:
        packet = station.queue.popleft()
        metrics = station.metrics
        if delivered:
            metrics.delivered_packets += 1
            metrics.delivered_bytes += packet.size
            metrics.delays.append(completion - packet.enqueue_time)
        else:
            metrics.drops += 1
        if station.spec.role == "video":
            station.results.append(
                PacketOutcome(
                    packet=packet,
                    result=TxResult(delivered=delivered, attempts=packet.attempts, completion_time=completion),
                )
            )
        station.cw = self.config.cw_min
        station.backoff = None

    def _head(self, station: _Station) -> DcfPacket | None:
        if not station.queue and station.spec.role == "saturated":
            station.queue.append(
                DcfPacket(
                    station=station.index,
                    size=station.spec.packet_bytes,
                    retry_limit=station.spec.retry_limit,
                    enqueue_time=self.clock,
                )
            )
        return station.queue[0] if station.queue else None

    def _materialize_arrivals(self) -> None:
        config = self.config
        for station in self.stations:
            spec = station.spec
            while station.next_arrival <= self.clock:
                remaining = spec.packet_bytes
                while remaining > 0:
                    size = min(remaining, config.mtu_payload)
                    self._enqueue(station, size, spec.retry_limit, None)
                    remaining -= size
                if spec.role == "poisson":
                    station.next_arrival += self._poisson_gap(spec)
                else:
                    station.next_arrival += config.ms_to_slots(spec.interval_ms)

    def _enqueue(self, station: _Station, size: int, retry_limit: int, tag: Any) -> bool:
        if len(station.queue) >= self.config.queue_limit:
            station.metrics.queue_drops += 1
            return False
        station.queue.append(
            DcfPacket(station=station.index, size=size, retry_limit=retry_limit, enqueue_time=self.clock, tag=tag)
        )
        return True

    def _poisson_gap(self, spec: StationSpec) -> float:
        mean_slots = self.config.ms_to_slots(1000.0 / spec.rate_pps)
        return float(self.rng.exponential(mean_slots))

    def _draw_backoff(self, cw: int) -> int:
        return int(self.rng.integers(0, cw + 1))

    def _station(self, station: int) -> _Station:
        if not 0 <= station < len(self.stations):
            raise UnknownStationError(station)
        return self.stations[station]


def dcf_new(config: DcfConfig, seed: int, record_events: bool = False) -> DcfSimulator:
    return DcfSimulator(config, seed, record_events=record_events)
