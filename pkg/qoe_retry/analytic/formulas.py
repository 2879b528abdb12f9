"""
Closed-form expressions for retry-limit scheduling of IPPP video.

Covers the expected attempt count of a retry-limited packet, the
frozen-frame expectations of the fixed-limit baseline and of the
three-priority method, the packet-count relations between frame and
packet totals, the compatibility gaps, the sufficient condition for the
algorithmic compatibility test and the frozen-frame upper bound.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import NonConvergentParameterError, ParameterError
from .markov import stationary_closed_form
from .models import (
    RetryPolicy,
    VideoModelParams,
    check_attempts,
    check_probability,
    ipow,
)


def expected_attempts(p: float, r: int) -> float:
    """
    Average number of transmission attempts of a packet with retry limit r.

    Args:
        p: Per-attempt collision probability in [0, 1)
        r: Retry limit (maximum attempts), r >= 1

    Returns:
        float: (1 - p^r) / (1 - p), a value in [1, r]
    """
    check_probability("p", p)
    check_attempts("r", r)
    return (1.0 - ipow(p, r)) / (1.0 - p)


def expected_attempts_series(p: float, r: int) -> float:
    """Term-by-term sum: success after k attempts plus r attempts on failure."""
    check_probability("p", p)
    check_attempts("r", r)
    terms = [k * ipow(p, k - 1) * (1.0 - p) for k in range(1, r + 1)]
    terms.append(r * ipow(p, r))
    return math.fsum(terms)


def loss_rate(p: float, r: int) -> float:
    check_probability("p", p)
    check_attempts("r", r)
    return ipow(p, r)


def collision_for_loss_rate(loss: float, r: int) -> float:
    """Per-attempt collision probability that yields the given loss rate at limit r."""
    check_probability("loss", loss)
    check_attempts("r", r)
    return loss ** (1.0 / r)


def _check_counts(**values: float) -> None:
    for name, value in values.items():
        if value < 0:
            raise ParameterError(f"{name} must be nonnegative, got {value}")


def _check_big_d(big_d: int) -> None:
    if big_d < 1:
        raise ParameterError(f"big_d must be >= 1, got {big_d}")


def expected_frozen_baseline(p0: float, n: float, big_d: int) -> float:
    """Expected frozen frames with a fixed retry limit: one interval of D frames per lost packet."""
    _check_counts(p0=p0, n=n)
    _check_big_d(big_d)
    return p0 * n * big_d


def expected_frozen_proposed(p1: float, n1: float, p2: float, n2: float, big_d: int) -> float:
    _check_counts(p1=p1, n1=n1, p2=p2, n2=n2)
    _check_big_d(big_d)
    return (p1 * n1 + p2 * n2) * big_d


def frozen_interval_packet_counts(
    n_f_proposed: float, params: VideoModelParams
) -> tuple[float, float]:
    """
    Expected priority-3 packets and IDR packets given the expected frozen frames.

    Returns:
        tuple: (n3, n_idr). n3 is zero when D = 1 since no frame gets priority 3.
    """
    _check_counts(n_f_proposed=n_f_proposed)
    big_d = params.big_d
    if big_d == 1:
        n3 = 0.0
    else:
        n3 = (big_d - 1) / big_d * n_f_proposed * params.d_prime
    n_idr = (n_f_proposed / big_d + 1.0) * params.d
    return n3, n_idr


def expected_packets_baseline(n_frames: int, params: VideoModelParams, p0: float) -> float:
    """
    Fixed point of n = (p0 n + 1) d + (N - (p0 n + 1)) d'.

    Raises:
        NonConvergentParameterError: if p0 * (d - d') >= 1
    """
    check_probability("p0", p0)
    _check_counts(n_frames=n_frames)
    product = p0 * params.delta_d
    if product >= 1.0:
        raise NonConvergentParameterError(
            f"p0 * (d - d') = {product} >= 1: expected packet count diverges", product
        )
    return (params.d_prime * n_frames + params.delta_d) / (1.0 - product)


def frames_from_packets(n: float, params: VideoModelParams, p0: float) -> float:
    """Frame count implied by n expected packets under a fixed retry limit."""
    check_probability("p0", p0)
    _check_counts(n=n)
    return (n - (p0 * n + 1.0) * params.delta_d) / params.d_prime


def expected_packets_proposed(n_frames: int, params: VideoModelParams, p1: float) -> float:
    """
    Packet total of the three-priority method for N frames.

    The first frame is IDR; the remaining N - 1 frames are IDR at the stationary
    IDR-frame rate of the priority Markov chain.
    """
    check_probability("p1", p1)
    _check_counts(n_frames=n_frames)
    if n_frames == 0:
        return 0.0
    idr_rate = stationary_closed_form(params, p1).idr_frame_rate(params)
    return params.d_prime * n_frames + params.delta_d * (1.0 + (n_frames - 1) * idr_rate)


def frozen_from_idr_count(n_idr_frames: int, big_d: int) -> int:
    """Every IDR frame after the first ends one frozen interval of D frames."""
    _check_big_d(big_d)
    if n_idr_frames < 1:
        raise ParameterError(f"a sequence holds at least one IDR frame, got {n_idr_frames}")
    return (n_idr_frames - 1) * big_d


def frozen_interval_frames(delay_ms: float, fps: float) -> int:
    """
    Frames emitted during one feedback delay, D = max(1, ceil(delay * fps)).

    Exact rational arithmetic keeps 100 ms at 30 fps at D = 3.
    """
    if delay_ms < 0:
        raise ParameterError(f"delay_ms must be >= 0, got {delay_ms}")
    if fps <= 0:
        raise ParameterError(f"fps must be > 0, got {fps}")
    frames = Fraction(str(delay_ms)) * Fraction(str(fps)) / 1000
    return max(1, math.ceil(frames))


def sufficient_condition_margin(p: float, policy: RetryPolicy, params: VideoModelParams) -> float:
    """
    Left side of the sufficient condition for the algorithmic compatibility test.

    The condition holds iff the returned value is strictly positive.
    """
    check_probability("p", p)
    r1, r3, r = policy.r1, policy.r3, policy.r_base
    tail = (ipow(p, r3 + r1 - r) - ipow(p, r1)) * (params.big_d - 1) * params.d_prime
    return tail - (1.0 - ipow(p, r1 - r))


def compatibility_gap_original(
    p: float,
    p_tilde: float,
    policy: RetryPolicy,
    n: float,
    n1: float,
    n2: float,
    n3: float,
) -> float:
    """Baseline expected attempts minus the three-priority expected attempts (expected counts)."""
    check_probability("p", p)
    check_probability("p_tilde", p_tilde)
    _check_counts(n=n, n1=n1, n2=n2, n3=n3)
    baseline = expected_attempts(p_tilde, policy.r_base) * n
    return baseline - _priority_attempts(p, policy, n1, n2, n3)


def compatibility_gap_algorithmic(
    p: float, policy: RetryPolicy, n1: float, n2: float, n3: float
) -> float:
    check_probability("p", p)
    _check_counts(n1=n1, n2=n2, n3=n3)
    budget = expected_attempts(p, policy.r_base) * (n1 + n2 + n3)
    return budget - _priority_attempts(p, policy, n1, n2, n3)


def compatibility_gap_lower_bound(
    p: float, policy: RetryPolicy, params: VideoModelParams, n1: float
) -> float:
    """p^R n1 / (1 - p) times the sufficient-condition margin."""
    check_probability("p", p)
    _check_counts(n1=n1)
    scale = ipow(p, policy.r_base) * n1 / (1.0 - p)
    return scale * sufficient_condition_margin(p, policy, params)


def _priority_attempts(p: float, policy: RetryPolicy, n1: float, n2: float, n3: float) -> float:
    return (
        expected_attempts(p, policy.r1) * n1
        + expected_attempts(p, policy.r2) * n2
        + expected_attempts(p, policy.r3) * n3
    )


def frozen_bound(
    n_f_baseline: float, p0: float, p1: float, params: VideoModelParams
) -> float:
    """
    Upper bound on the expected frozen frames of the three-priority method.

    Args:
        n_f_baseline: Expected frozen frames with the fixed retry limit
        p0: Packet loss rate with the fixed retry limit
        p1: Packet loss rate with the priority-1 retry limit, p1 < p0
        params: Packets per frame and frozen-interval length

    Returns:
        float: min(N_f, N_f / ([(d + (D-1)d')(1 - (d'-1)/2 p1) - d] p0 + 1))
    """
    _check_counts(n_f_baseline=n_f_baseline)
    check_probability("p0", p0)
    check_probability("p1", p1)
    if p1 > p0:
        raise ParameterError(f"p1={p1} must not exceed p0={p0}")
    if n_f_baseline == 0:
        return 0.0
    shrink = params.cycle_packets * (1.0 - (params.d_prime - 1) / 2.0 * p1) - params.d
    denominator = shrink * p0 + 1.0
    return min(n_f_baseline, n_f_baseline / denominator)


def markov_frozen_bound(n: float, params: VideoModelParams, p1: float) -> float:
    """Bound D (1 - P_b) n / ([d + (D-1)d'](1 - P_b) + P_a d') taken before the Taylor step."""
    _check_counts(n=n)
    check_probability("p1", p1, upper_open=False)
    p_a = ipow(1.0 - p1, params.d)
    p_b = ipow(1.0 - p1, params.d_prime)
    denominator = params.cycle_packets * (1.0 - p_b) + p_a * params.d_prime
    return params.big_d * (1.0 - p_b) * n / denominator
