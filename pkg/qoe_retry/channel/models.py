from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

StationRole = Literal["video", "saturated", "poisson", "cbr"]


@dataclass(frozen=True, slots=True)
class TxResult:
    delivered: bool
    attempts: int
    completion_time: float


def is_window_bound(value: int) -> bool:
    """True for contention-window bounds of the form 2^k - 1."""
    return value >= 1 and (value + 1) & value == 0


class StationSpec(BaseModel):
    """One contending station of the DCF network."""

    role: StationRole = Field(..., description="Traffic role of the station")
    packet_bytes: int = Field(default=1500, gt=0, description="Bytes per generated message")
    rate_pps: float | None = Field(default=None, description="Poisson arrival rate in messages per second")
    interval_ms: float | None = Field(default=None, description="CBR message interval in milliseconds")
    retry_limit: int = Field(default=7, ge=1, description="Retry limit for generated packets")

    @model_validator(mode="after")
    def _check_arrivals(self) -> "StationSpec":
        if self.role == "poisson" and (self.rate_pps is None or self.rate_pps <= 0):
            raise ValueError("poisson stations need rate_pps > 0")
        if self.role == "cbr" and (self.interval_ms is None or self.interval_ms <= 0):
            raise ValueError("cbr stations need interval_ms > 0")
        return self


class DcfConfig(BaseModel):
    """Slotted DCF network: station mix, contention windows and timing."""

    stations: list[StationSpec] = Field(..., min_length=1, description="Stations in index order")
    cw_min: int = Field(default=15, description="Minimum contention window in slots")
    cw_max: int = Field(default=1023, description="Maximum contention window in slots")
    slot_time_us: float = Field(default=9.0, gt=0, description="Slot duration in microseconds")
    phy_rate_mbps: float = Field(default=13.0, gt=0, description="PHY rate used for airtime")
    header_slots: int = Field(default=14, ge=0, description="PHY/MAC overhead plus SIFS and ACK")
    default_retry: int = Field(default=7, ge=1, description="Retry limit of unmodified stations")
    queue_limit: int = Field(default=10_000, ge=1, description="Per-station FIFO depth")
    mtu_payload: int = Field(default=2304, gt=0, description="MSDU size for splitting CBR messages")

    @field_validator("cw_min", "cw_max")
    @classmethod
    def _check_window(cls, value: int) -> int:
        if not is_window_bound(value):
            raise ValueError(f"contention window bound must be of the form 2^k - 1, got {value}")
        return value

    @model_validator(mode="after")
    def _check_order(self) -> "DcfConfig":
        if self.cw_min > self.cw_max:
            raise ValueError(f"cw_min={self.cw_min} exceeds cw_max={self.cw_max}")
        return self

    @property
    def bytes_per_slot(self) -> float:
        return self.phy_rate_mbps * self.slot_time_us / 8.0

    @property
    def max_backoff_stages(self) -> int:
        return int(math.log2((self.cw_max + 1) // (self.cw_min + 1)))

    def tx_slots(self, size: int) -> int:
        return self.header_slots + math.ceil(size / self.bytes_per_slot)

    def ms_to_slots(self, ms: float) -> float:
        return ms * 1000.0 / self.slot_time_us

    def video_station(self) -> int:
        for index, spec in enumerate(self.stations):
            if spec.role == "video":
                return index
        raise ValueError("DCF network has no video station")


@dataclass(slots=True)
class DcfPacket:
    station: int
    size: int
    retry_limit: int
    enqueue_time: int
    tag: Any = None
    attempts: int = 0


@dataclass(frozen=True, slots=True)
class PacketOutcome:
    packet: DcfPacket
    result: TxResult


@dataclass(slots=True)
class StationMetrics:
    station: int
    role: str
    delivered_packets: int = 0
    delivered_bytes: int = 0
    attempts: int = 0
    collisions: int = 0
    drops: int = 0
    queue_drops: int = 0
    delays: list[int] = field(default_factory=list)

    @property
    def measured_p(self) -> float:
        return self.collisions / self.attempts if self.attempts else 0.0


@dataclass(slots=True)
class DcfMetrics:
    stations: list[StationMetrics]
    clock: int
    slot_time_us: float

    @property
    def attempts(self) -> int:
        return sum(station.attempts for station in self.stations)

    @property
    def collisions(self) -> int:
        return sum(station.collisions for station in self.stations)

    @property
    def measured_p(self) -> float:
        attempts = self.attempts
        return self.collisions / attempts if attempts else 0.0

    @property
    def elapsed_seconds(self) -> float:
        return self.clock * self.slot_time_us * 1e-6

    def throughput_Bps(self, station: int) -> float:
        elapsed = self.elapsed_seconds
        return self.stations[station].delivered_bytes / elapsed if elapsed > 0 else 0.0
