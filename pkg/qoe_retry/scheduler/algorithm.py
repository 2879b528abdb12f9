"""
Retry-limit scheduler for the video sender's MAC.

Frames are classified once, before their first packet is queued; every
packet of the frame then carries the retry limit of that priority.
Transmission outcomes feed the collision estimate and the drop flag that
pushes the following frames to priority 3 until the next IDR frame.
"""

from __future__ import annotations

import logging
from collections import deque

from ..analytic.models import RetryPolicy, ipow
from ..errors import TransmissionResultError
from .models import Priority, SchedulerState, WindowMode

logger = logging.getLogger("qoe-retry.scheduler")


class RetryScheduler:
    """Three-priority retry-limit assignment with the compatibility test."""

    def __init__(self, policy: RetryPolicy | None = None, window_mode: WindowMode | None = None):
        self.state = SchedulerState(
            policy=policy or RetryPolicy(),
            window_mode=window_mode or WindowMode(),
        )
        self._registrations: deque[Priority] = deque()
        self._results: deque[tuple[int, int]] = deque()

    @property
    def policy(self) -> RetryPolicy:
        return self.state.policy

    @property
    def p_hat(self) -> float:
        return self.state.p_hat

    def classify_frame(self, is_idr: bool) -> Priority:
        state = self.state
        if is_idr:
            priority = Priority.ONE
        elif state.q0 == Priority.THREE:
            priority = Priority.THREE
        elif state.last_frame_dropped:
            priority = Priority.THREE
        elif state.q0 == Priority.TWO:
            priority = Priority.TWO
        elif self.compatibility_ok():
            priority = Priority.ONE
        else:
            priority = Priority.TWO

        if priority != state.q0:
            logger.debug(f"Priority {state.q0} -> {int(priority)} (p_hat={state.p_hat:.4f})")
        state.q0 = int(priority)
        state.last_frame_dropped = False
        return priority

    def register_packet(self, q: Priority | int) -> int:
        """Count one packet of priority q and return its retry limit."""
        priority = Priority(int(q))
        state = self.state
        self._bump(priority, 1)
        if state.window_mode.is_sliding:
            self._registrations.append(priority)
            while len(self._registrations) > state.window_mode.window_packets:
                self._bump(self._registrations.popleft(), -1)
        return state.policy.limit_for(priority)

    def record_transmission_result(self, attempts_made: int, delivered: bool, retry_limit: int) -> SchedulerState:
        """
        Fold one packet's MAC outcome into the collision estimate.

        Raises:
            TransmissionResultError: If the (delivered, attempts, limit) triple is inconsistent
        """
        if attempts_made < 1 or attempts_made > retry_limit:
            raise TransmissionResultError(
                f"attempts_made={attempts_made} outside [1, {retry_limit}]"
            )
        if not delivered and attempts_made != retry_limit:
            raise TransmissionResultError(
                f"dropped packet used {attempts_made} of {retry_limit} attempts"
            )

        state = self.state
        collisions = attempts_made - 1 if delivered else attempts_made
        state.attempts_total += attempts_made
        state.collisions_total += collisions
        if state.window_mode.is_sliding:
            self._results.append((attempts_made, collisions))
            while len(self._results) > state.window_mode.window_packets:
                old_attempts, old_collisions = self._results.popleft()
                state.attempts_total -= old_attempts
                state.collisions_total -= old_collisions
        if not delivered:
            state.last_frame_dropped = True
        return state

    def compatibility_ok(self) -> bool:
        """
        Whether the priority mix keeps expected attempts within the fixed-limit budget.

        With R2 = R the priority-2 terms cancel, leaving
        (p^R3 - p^R) M3 >= (p^R - p^R1) M1.
        """
        state = self.state
        p = state.p_hat
        policy = state.policy
        p_r = ipow(p, policy.r_base)
        credit = (ipow(p, policy.r3) - p_r) * state.m3
        debit = (p_r - ipow(p, policy.r1)) * state.m1
        return credit >= debit

    def reset_window(self, reset_attempts: bool | None = None) -> SchedulerState:
        """Start a new measurement interval; q0 and the drop flag are kept."""
        state = self.state
        state.m1 = state.m2 = state.m3 = 0
        self._registrations.clear()
        clear_attempts = state.window_mode.reset_attempts if reset_attempts is None else reset_attempts
        if clear_attempts:
            state.attempts_total = 0
            state.collisions_total = 0
            self._results.clear()
        return state

    def _bump(self, priority: Priority, delta: int) -> None:
        state = self.state
        if priority == Priority.ONE:
            state.m1 += delta
        elif priority == Priority.TWO:
            state.m2 += delta
        else:
            state.m3 += delta


class FixedRetryScheduler(RetryScheduler):
    """Unmodified MAC: every packet uses the baseline limit R (priority 2, R2 = R)."""

    def classify_frame(self, is_idr: bool) -> Priority:
        self.state.q0 = int(Priority.TWO)
        self.state.last_frame_dropped = False
        return Priority.TWO


def make_scheduler(
    method: str, policy: RetryPolicy | None = None, window_mode: WindowMode | None = None
) -> RetryScheduler:
    if method == "proposed":
        return RetryScheduler(policy, window_mode)
    if method == "baseline":
        return FixedRetryScheduler(policy, window_mode)
    raise ValueError(f"Unknown method: '{method}'. Must be one of: baseline, proposed")
