from __future__ import annotations

from ..errors import ParameterError
from .models import MSDU_BYTES, PacketDescriptor, VideoFrame, packet_count


def packetize(frame: VideoFrame, mtu_payload: int = MSDU_BYTES) -> list[PacketDescriptor]:
    """
    Split a frame into MSDU-sized packets.

    All packets are mtu_payload bytes except possibly the last one.

    Raises:
        ParameterError: If the frame is empty or mtu_payload is not positive
    """
    if mtu_payload <= 0:
        raise ParameterError(f"mtu_payload must be positive, got {mtu_payload}")
    if frame.size <= 0:
        raise ParameterError(f"Frame {frame.index} has no payload (size={frame.size})")

    count = packet_count(frame.size, mtu_payload)
    last_size = frame.size - (count - 1) * mtu_payload
    return [
        PacketDescriptor(
            frame_index=frame.index,
            seq=seq,
            size=last_size if seq == count - 1 else mtu_payload,
            is_last=seq == count - 1,
        )
        for seq in range(count)
    ]
