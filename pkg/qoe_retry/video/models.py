from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MSDU_BYTES = 2304


class FrameKind(str, Enum):
    IDR = "I"
    P = "P"


class DisplayStatus(str, Enum):
    FRESH = "fresh"
    FROZEN = "frozen"


def packet_count(size: int, mtu_payload: int) -> int:
    """Number of MSDUs needed for a frame of size bytes."""
    return -(-size // mtu_payload)


@dataclass(frozen=True, slots=True)
class VideoFrame:
    index: int
    kind: FrameKind
    size: int
    packet_count: int

    @property
    def is_idr(self) -> bool:
        return self.kind is FrameKind.IDR


@dataclass(frozen=True, slots=True)
class PacketDescriptor:
    frame_index: int
    seq: int
    size: int
    is_last: bool


@dataclass(frozen=True, slots=True)
class FeedbackEvent:
    """Receiver loss report; delivery_frame is the first frame the encoder emits after it arrives."""

    lost_frame_index: int
    delivery_time: float
    delivery_frame: int


@dataclass(frozen=True, slots=True)
class FrozenStats:
    frozen: int
    total: int
    fraction: float
    intervals: tuple[int, ...]

    @property
    def interval_count(self) -> int:
        return len(self.intervals)
