from .bernoulli import BernoulliChannel
from .dcf import DcfSimulator, dcf_new
from .models import (
    DcfConfig,
    DcfMetrics,
    DcfPacket,
    PacketOutcome,
    StationMetrics,
    StationSpec,
    TxResult,
    is_window_bound,
)

__all__ = [
    "BernoulliChannel",
    "DcfConfig",
    "DcfMetrics",
    "DcfPacket",
    "DcfSimulator",
    "PacketOutcome",
    "StationMetrics",
    "StationSpec",
    "TxResult",
    "dcf_new",
    "is_window_bound",
]
