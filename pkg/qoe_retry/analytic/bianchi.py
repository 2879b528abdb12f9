from __future__ import annotations

import logging
import math

from ..errors import ConvergenceError, ParameterError
from .models import check_attempts

logger = logging.getLogger("qoe-retry.bianchi")

DEFAULT_RETRY_LIMIT = 7


def attempt_probability(p: float, cw_min: int, max_backoff_stages: int, r: int) -> float:
    """
    Per-slot transmission probability of a saturated station.

    Expected attempts per packet divided by the expected contention slots
    per packet, where stage i draws a backoff uniformly from
    [0, W_i - 1] with W_i = 2^min(i, m) * W and the attempt itself takes
    one slot.
    """
    attempts = 0.0
    slots = 0.0
    reach = 1.0
    for stage in range(r):
        window = (2 ** min(stage, max_backoff_stages)) * cw_min
        attempts += reach
        slots += reach * (window + 1) / 2.0
        reach *= p
    return attempts / slots


def bianchi_fixed_point(
    n_stations: int,
    cw_min: int,
    max_backoff_stages: int,
    r: int = DEFAULT_RETRY_LIMIT,
    tol: float = 1e-10,
    max_iterations: int = 200,
) -> tuple[float, float]:
    """
    Saturated-DCF fixed point of the attempt and conditional collision probabilities.

    Args:
        n_stations: Contending stations (1 is accepted and yields p = 0)
        cw_min: Minimum contention window W in slots
        max_backoff_stages: Number of window doublings m
        r: Retry limit in attempts

    Returns:
        tuple: (tau, p) with p = 1 - (1 - tau)^(n - 1)

    Raises:
        ConvergenceError: If bisection does not reach the tolerance
    """
    if n_stations < 1:
        raise ParameterError(f"n_stations must be >= 1, got {n_stations}")
    if cw_min < 1:
        raise ParameterError(f"cw_min must be >= 1, got {cw_min}")
    if max_backoff_stages < 0:
        raise ParameterError(f"max_backoff_stages must be >= 0, got {max_backoff_stages}")
    check_attempts("r", r)

    if n_stations == 1:
        return attempt_probability(0.0, cw_min, max_backoff_stages, r), 0.0

    def gap(p: float) -> float:
        tau = attempt_probability(p, cw_min, max_backoff_stages, r)
        return p - (1.0 - (1.0 - tau) ** (n_stations - 1))

    # gap(0) < 0 and gap(1) > 0; gap is increasing in p.
    low, high = 0.0, 1.0
    for iteration in range(1, max_iterations + 1):
        middle = 0.5 * (low + high)
        if gap(middle) < 0.0:
            low = middle
        else:
            high = middle
        if high - low < tol * 1e-3:
            break
    p = 0.5 * (low + high)
    tau = attempt_probability(p, cw_min, max_backoff_stages, r)
    residual = abs(gap(p))
    if not math.isfinite(residual) or residual > tol:
        raise ConvergenceError(
            f"Bianchi fixed point not reached for n={n_stations} (residual {residual:.3e})",
            iterations=iteration,
            residual=residual,
        )
    logger.debug(f"Bianchi fixed point n={n_stations}: tau={tau:.6f}, p={p:.6f}")
    return tau, p
