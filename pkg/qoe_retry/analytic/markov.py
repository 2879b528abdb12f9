"""
Packet-class Markov chain of the three-priority method.

States are, in order, the d packets of an IDR frame (I,1..d), the d'
packets of a priority-1 P frame (N,1..d') and the (D-1)d' priority-3
packets of a frozen interval (3,1..(D-1)d'). With D = 1 the priority-3
row is absent and a failed frame leads straight back to (I,1).
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import ConvergenceError, ParameterError
from .models import StationaryDist, VideoModelParams, check_probability, ipow

logger = logging.getLogger("qoe-retry.markov")

STOCHASTIC_TOLERANCE = 1e-9
RESIDUAL_TOLERANCE = 1e-12


def state_labels(params: VideoModelParams) -> list[str]:
    labels = [f"I,{i}" for i in range(1, params.d + 1)]
    labels += [f"N,{j}" for j in range(1, params.d_prime + 1)]
    labels += [f"3,{k}" for k in range(1, (params.big_d - 1) * params.d_prime + 1)]
    return labels


def markov_transition_matrix(params: VideoModelParams, p1: float) -> np.ndarray:
    """
    Row-stochastic transition matrix of the packet-class chain.

    Args:
        params: Packets per IDR frame, per P frame and frozen-interval length
        p1: Loss rate of a priority-1 packet, in [0, 1)

    Returns:
        np.ndarray: Square matrix over d + d' + (D-1)d' states
    """
    check_probability("p1", p1)
    d, d_prime = params.d, params.d_prime
    tail = (params.big_d - 1) * d_prime
    size = d + d_prime + tail
    idr_first = 0
    p_first = d
    tail_first = d + d_prime
    failure_target = tail_first if tail else idr_first

    p_a = ipow(1.0 - p1, d)
    p_b = ipow(1.0 - p1, d_prime)

    matrix = np.zeros((size, size), dtype=float)
    for i in range(d - 1):
        matrix[idr_first + i, idr_first + i + 1] = 1.0
    last_idr = idr_first + d - 1
    matrix[last_idr, p_first] += p_a
    matrix[last_idr, failure_target] += 1.0 - p_a

    for j in range(d_prime - 1):
        matrix[p_first + j, p_first + j + 1] = 1.0
    last_p = p_first + d_prime - 1
    matrix[last_p, p_first] += p_b
    matrix[last_p, failure_target] += 1.0 - p_b

    for k in range(tail - 1):
        matrix[tail_first + k, tail_first + k + 1] = 1.0
    if tail:
        matrix[tail_first + tail - 1, idr_first] = 1.0
    return matrix


def _check_stochastic(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"transition matrix must be square, got shape {matrix.shape}")
    if np.any(matrix < -STOCHASTIC_TOLERANCE):
        raise ParameterError("transition matrix has negative entries")
    row_error = np.max(np.abs(matrix.sum(axis=1) - 1.0))
    if row_error > STOCHASTIC_TOLERANCE:
        raise ParameterError(f"transition matrix rows do not sum to 1 (max error {row_error:.3e})")


def stationary_residual(matrix: np.ndarray, pi: np.ndarray) -> float:
    return float(np.max(np.abs(pi @ matrix - pi)))


def stationary_numeric(
    matrix: np.ndarray,
    tol: float = RESIDUAL_TOLERANCE,
    max_iterations: int = 200_000,
) -> np.ndarray:
    """
    Stationary vector of an irreducible row-stochastic matrix.

    Solves (P^T - I) pi = 0 with the last equation replaced by the
    normalization sum(pi) = 1, then falls back to power iteration on the
    lazy chain (P + I) / 2 when the solve is singular or inaccurate.

    Raises:
        ConvergenceError: If the residual stays above tol within the iteration budget
    """
    matrix = np.asarray(matrix, dtype=float)
    _check_stochastic(matrix)
    size = matrix.shape[0]

    system = matrix.T - np.eye(size)
    system[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    start: np.ndarray | None = None
    try:
        pi = np.linalg.solve(system, rhs)
        residual = stationary_residual(matrix, pi)
        if residual < tol and np.all(pi > -tol):
            return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()
        logger.debug(f"Linear solve residual {residual:.3e}; refining by power iteration")
        start = np.clip(pi, 0.0, None)
    except np.linalg.LinAlgError as exc:
        logger.debug(f"Linear solve failed ({exc}); using power iteration")

    return _power_iteration(matrix, start, tol, max_iterations)


def _power_iteration(
    matrix: np.ndarray, start: np.ndarray | None, tol: float, max_iterations: int
) -> np.ndarray:
    size = matrix.shape[0]
    lazy = 0.5 * (matrix + np.eye(size))
    pi = np.full(size, 1.0 / size) if start is None or start.sum() <= 0 else start / start.sum()
    residual = float("inf")
    for iteration in range(1, max_iterations + 1):
        pi = pi @ lazy
        pi /= pi.sum()
        if iteration % 16 == 0:
            residual = stationary_residual(matrix, pi)
            if residual < tol:
                return pi
    residual = stationary_residual(matrix, pi)
    if residual < tol:
        return pi
    raise ConvergenceError(
        f"power iteration did not reach residual {tol:.1e} in {max_iterations} iterations",
        iterations=max_iterations,
        residual=residual,
    )


def stationary_closed_form(params: VideoModelParams, p1: float) -> StationaryDist:
    """
    Closed-form stationary distribution of the packet-class chain.

    p1 = 0 returns the limit with no IDR mass (q_N1 = 1/d'); p1 = 1 returns
    the chain that alternates an IDR frame and a frozen interval.
    """
    check_probability("p1", p1, upper_open=False)
    d, d_prime, big_d = params.d, params.d_prime, params.big_d
    p_a = ipow(1.0 - p1, d)
    p_b = ipow(1.0 - p1, d_prime)

    if p1 == 0.0:
        return StationaryDist(
            q_I1=0.0, q_N1=1.0 / d_prime, q_31=0.0, q_I=0.0, p_a=p_a, p_b=p_b
        )

    denominator = (d + (big_d - 1) * d_prime) * (1.0 - p_b) + p_a * d_prime
    q_i1 = (1.0 - p_b) / denominator
    q_n1 = p_a / (1.0 - p_b) * q_i1
    return StationaryDist(
        q_I1=q_i1,
        q_N1=q_n1,
        q_31=q_i1,
        q_I=d * q_i1,
        p_a=p_a,
        p_b=p_b,
    )
