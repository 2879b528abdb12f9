"""
IPPP encoder driven by receiver loss feedback.

The first frame is intra coded. Afterwards an IDR frame is emitted only
when a loss report arms the encoder; reports about frames older than the
most recently scheduled IDR are ignored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .models import MSDU_BYTES, FrameKind, VideoFrame, packet_count
from .traces import FrameSizeProvider

logger = logging.getLogger("qoe-retry.encoder")


@dataclass(slots=True)
class EncoderState:
    size_provider: FrameSizeProvider
    mtu_payload: int = MSDU_BYTES
    next_index: int = 0
    scheduled_idr_index: int = 0
    pending_idr: bool = False
    idr_frames: int = 0
    suppressed_feedback: int = 0


class VideoEncoder:
    def __init__(self, size_provider: FrameSizeProvider, mtu_payload: int = MSDU_BYTES):
        self.state = EncoderState(size_provider=size_provider, mtu_payload=mtu_payload)

    def next_frame(self, pending_idr: bool | None = None) -> VideoFrame:
        """Emit the next frame; an explicit pending_idr overrides the armed flag."""
        state = self.state
        index = state.next_index
        want_idr = state.pending_idr if pending_idr is None else pending_idr
        if index == 0 or want_idr:
            kind = FrameKind.IDR
            state.scheduled_idr_index = index
            state.pending_idr = False
            state.idr_frames += 1
        else:
            kind = FrameKind.P

        size = state.size_provider.size_for(index, kind)
        state.next_index = index + 1
        return VideoFrame(
            index=index,
            kind=kind,
            size=size,
            packet_count=packet_count(size, state.mtu_payload),
        )

    def on_feedback(self, lost_frame_index: int) -> bool:
        """Arm an IDR unless the lost frame precedes the last scheduled IDR."""
        state = self.state
        if lost_frame_index < state.scheduled_idr_index:
            state.suppressed_feedback += 1
            return False
        if not state.pending_idr:
            logger.debug(f"Loss report for frame {lost_frame_index}; IDR armed at frame {state.next_index}")
        state.pending_idr = True
        return True
