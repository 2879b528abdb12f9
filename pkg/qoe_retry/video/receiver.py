from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import IngestOrderError
from .models import DisplayStatus, FrozenStats


@dataclass(slots=True)
class ReceiverState:
    clean: bool = False
    frozen_count: int = 0
    total_count: int = 0
    interval_lengths: list[int] = field(default_factory=list)
    in_interval: bool = False


class VideoReceiver:
    """
    Tracks decodability of the received sequence.

    A lost frame breaks the decode chain until a fully delivered IDR frame
    restores it; frames shown in between are frozen. A lost IDR frame opens
    a new frozen interval even when the previous one is still running.
    """

    def __init__(self) -> None:
        self.state = ReceiverState()

    def ingest(self, frame_index: int, is_idr: bool, all_packets_delivered: bool) -> DisplayStatus:
        state = self.state
        if frame_index != state.total_count:
            raise IngestOrderError(
                f"Frame {frame_index} ingested out of order; expected {state.total_count}"
            )

        if not all_packets_delivered:
            state.clean = False
        elif is_idr:
            state.clean = True
        state.total_count += 1

        if state.clean:
            state.in_interval = False
            return DisplayStatus.FRESH

        state.frozen_count += 1
        starts_interval = not state.in_interval or (is_idr and not all_packets_delivered)
        if starts_interval:
            state.interval_lengths.append(1)
        else:
            state.interval_lengths[-1] += 1
        state.in_interval = True
        return DisplayStatus.FROZEN

    def stats(self) -> FrozenStats:
        state = self.state
        fraction = state.frozen_count / state.total_count if state.total_count else 0.0
        return FrozenStats(
            frozen=state.frozen_count,
            total=state.total_count,
            fraction=fraction,
            intervals=tuple(state.interval_lengths),
        )
