from .bianchi import bianchi_fixed_point
from .formulas import (
    collision_for_loss_rate,
    compatibility_gap_algorithmic,
    compatibility_gap_lower_bound,
    compatibility_gap_original,
    expected_attempts,
    expected_attempts_series,
    expected_frozen_baseline,
    expected_frozen_proposed,
    expected_packets_baseline,
    expected_packets_proposed,
    frames_from_packets,
    frozen_bound,
    frozen_from_idr_count,
    frozen_interval_frames,
    frozen_interval_packet_counts,
    loss_rate,
    markov_frozen_bound,
    sufficient_condition_margin,
)
from .markov import (
    markov_transition_matrix,
    state_labels,
    stationary_closed_form,
    stationary_numeric,
    stationary_residual,
)
from .models import AnalyticParams, RetryPolicy, StationaryDist, VideoModelParams, ipow

__all__ = [
    "AnalyticParams",
    "RetryPolicy",
    "StationaryDist",
    "VideoModelParams",
    "bianchi_fixed_point",
    "collision_for_loss_rate",
    "compatibility_gap_algorithmic",
    "compatibility_gap_lower_bound",
    "compatibility_gap_original",
    "expected_attempts",
    "expected_attempts_series",
    "expected_frozen_baseline",
    "expected_frozen_proposed",
    "expected_packets_baseline",
    "expected_packets_proposed",
    "frames_from_packets",
    "frozen_bound",
    "frozen_from_idr_count",
    "frozen_interval_frames",
    "frozen_interval_packet_counts",
    "ipow",
    "loss_rate",
    "markov_frozen_bound",
    "markov_transition_matrix",
    "state_labels",
    "stationary_closed_form",
    "stationary_numeric",
    "stationary_residual",
    "sufficient_condition_margin",
]
