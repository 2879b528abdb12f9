from .encoder import EncoderState, VideoEncoder
from .models import (
    MSDU_BYTES,
    DisplayStatus,
    FeedbackEvent,
    FrameKind,
    FrozenStats,
    PacketDescriptor,
    VideoFrame,
    packet_count,
)
from .packetizer import packetize
from .receiver import ReceiverState, VideoReceiver
from .traces import (
    VIDEO_PRESETS,
    FrameSizeProvider,
    SyntheticSizes,
    TraceSizes,
    VideoPreset,
    get_preset,
    load_trace,
)

__all__ = [
    "MSDU_BYTES",
    "VIDEO_PRESETS",
    "DisplayStatus",
    "EncoderState",
    "FeedbackEvent",
    "FrameKind",
    "FrameSizeProvider",
    "FrozenStats",
    "PacketDescriptor",
    "ReceiverState",
    "SyntheticSizes",
    "TraceSizes",
    "VideoEncoder",
    "VideoFrame",
    "VideoPreset",
    "VideoReceiver",
    "get_preset",
    "load_trace",
    "packet_count",
    "packetize",
]
