from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Literal

from ..analytic.models import RetryPolicy
from ..errors import ParameterError

WindowModeName = Literal["cumulative", "sliding"]


class Priority(IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3


@dataclass(frozen=True, slots=True)
class WindowMode:
    """Accounting window for the packet counters and the collision estimate.

    cumulative counts from the start of the session; sliding keeps only the
    most recent window_packets registrations and transmission results.
    reset_attempts selects whether reset_window also clears the attempt
    counters behind the collision estimate.
    """

    mode: WindowModeName = "cumulative"
    window_packets: int | None = None
    reset_attempts: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("cumulative", "sliding"):
            raise ParameterError(f"Invalid window mode: '{self.mode}'")
        if self.mode == "sliding" and (self.window_packets is None or self.window_packets < 1):
            raise ParameterError("sliding window mode needs window_packets >= 1")

    @property
    def is_sliding(self) -> bool:
        return self.mode == "sliding"


@dataclass(slots=True)
class SchedulerState:
    policy: RetryPolicy
    window_mode: WindowMode = field(default_factory=WindowMode)
    q0: int = 0
    last_frame_dropped: bool = False
    m1: int = 0
    m2: int = 0
    m3: int = 0
    attempts_total: int = 0
    collisions_total: int = 0

    @property
    def p_hat(self) -> float:
        if self.attempts_total == 0:
            return 0.0
        return self.collisions_total / self.attempts_total

    @property
    def counters(self) -> tuple[int, int, int]:
        return (self.m1, self.m2, self.m3)

    def snapshot(self) -> tuple[int, bool, int, int, int, int, int]:
        return (
            self.q0,
            self.last_frame_dropped,
            self.m1,
            self.m2,
            self.m3,
            self.attempts_total,
            self.collisions_total,
        )
