from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..analytic import (
    AnalyticParams,
    RetryPolicy,
    VideoModelParams,
    expected_attempts,
    expected_frozen_baseline,
    expected_frozen_proposed,
    expected_packets_baseline,
    expected_packets_proposed,
    frozen_bound,
    markov_frozen_bound,
    markov_transition_matrix,
    stationary_closed_form,
    stationary_numeric,
    sufficient_condition_margin,
)

logger = logging.getLogger("qoe-retry.analytic-report")

REPORT_COLUMNS = ["quantity", "value"]


@dataclass(frozen=True, slots=True)
class AnalyticReportParams:
    p: float = 0.45
    p_tilde: float = 0.45
    d: int = 10
    d_prime: int = 2
    big_d: int = 3
    n_frames: int = 295
    policy: RetryPolicy = field(default_factory=RetryPolicy)

    @property
    def analytic(self) -> AnalyticParams:
        return AnalyticParams(p=self.p, p_tilde=self.p_tilde, policy=self.policy)

    @property
    def video(self) -> VideoModelParams:
        return VideoModelParams(d=self.d, d_prime=self.d_prime, big_d=self.big_d)


def analytic_report(params: AnalyticReportParams) -> pd.DataFrame:
    """
    Evaluate every analytic quantity for one parameter set.

    Raises:
        ParameterError: If the parameters are invalid
    """
    analytic = params.analytic
    video = params.video
    policy = params.policy
    p0, p1, p2, p3 = analytic.p0, analytic.p1, analytic.p2, analytic.p3

    n = expected_packets_baseline(params.n_frames, video, p0)
    n_proposed = expected_packets_proposed(params.n_frames, video, p1)
    closed = stationary_closed_form(video, p1)
    numeric = stationary_numeric(markov_transition_matrix(video, p1))
    stationary_gap = float(np.max(np.abs(numeric - closed.to_vector(video))))

    priority1_share = video.d * closed.q_I1 + video.d_prime * closed.q_N1
    n1 = n_proposed * priority1_share
    n_f = expected_frozen_baseline(p0, n, video.big_d)

    rows: list[tuple[str, float]] = [
        ("expected_attempts_R", expected_attempts(params.p_tilde, policy.r_base)),
        ("expected_attempts_R1", expected_attempts(params.p, policy.r1)),
        ("expected_attempts_R2", expected_attempts(params.p, policy.r2)),
        ("expected_attempts_R3", expected_attempts(params.p, policy.r3)),
        ("p0", p0),
        ("p1", p1),
        ("p2", p2),
        ("p3", p3),
        ("packets_baseline", n),
        ("packets_proposed", n_proposed),
        ("frozen_baseline", n_f),
        ("frozen_proposed", expected_frozen_proposed(p1, n1, p2, 0.0, video.big_d)),
        ("cond10_margin", sufficient_condition_margin(params.p, policy, video)),
        ("q_I1", closed.q_I1),
        ("q_N1", closed.q_N1),
        ("q_31", closed.q_31),
        ("q_I", closed.q_I),
        ("P_a", closed.p_a),
        ("P_b", closed.p_b),
        ("stationary_max_abs_gap", stationary_gap),
        ("markov_frozen_bound", markov_frozen_bound(n_proposed, video, p1)),
        ("frozen_bound", frozen_bound(n_f, p0, p1, video)),
    ]
    logger.debug(f"Analytic report for p={params.p}, p_tilde={params.p_tilde}: {len(rows)} quantities")
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)
