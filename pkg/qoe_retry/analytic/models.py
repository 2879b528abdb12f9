from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError


def ipow(base: float, exponent: int) -> float:
    """Integer power by repeated squaring."""
    if exponent < 0:
        raise ParameterError(f"exponent must be >= 0, got {exponent}")
    result = 1.0
    factor = float(base)
    remaining = int(exponent)
    while remaining:
        if remaining & 1:
            result *= factor
        factor *= factor
        remaining >>= 1
    return result


def check_probability(name: str, value: float, *, upper_open: bool = True) -> None:
    if upper_open:
        if not 0.0 <= value < 1.0:
            raise ParameterError(f"{name} must lie in [0, 1), got {value}")
    elif not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def check_attempts(name: str, value: int) -> None:
    if int(value) != value or value < 1:
        raise ParameterError(f"{name} must be an integer >= 1, got {value}")


@dataclass(frozen=True, slots=True)
class RetryPolicy:
    r1: int = 8
    r2: int = 7
    r3: int = 1
    r_base: int = 7

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "r3", "r_base"):
            check_attempts(name, getattr(self, name))
        if not self.r1 > self.r2 > self.r3 >= 1:
            raise ParameterError(
                f"retry limits must satisfy r1 > r2 > r3 >= 1, got ({self.r1}, {self.r2}, {self.r3})"
            )
        if self.r2 != self.r_base:
            raise ParameterError(f"r2 must equal the baseline limit {self.r_base}, got {self.r2}")

    def limit_for(self, priority: int) -> int:
        limits = {1: self.r1, 2: self.r2, 3: self.r3}
        try:
            return limits[int(priority)]
        except KeyError as exc:
            raise ParameterError(f"priority must be 1, 2 or 3, got {priority}") from exc

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r1, self.r2, self.r3)


@dataclass(frozen=True, slots=True)
class VideoModelParams:
    d: int
    d_prime: int
    big_d: int

    def __post_init__(self) -> None:
        check_attempts("d", self.d)
        check_attempts("d_prime", self.d_prime)
        if self.big_d < 1 or int(self.big_d) != self.big_d:
            raise ParameterError(f"big_d must be an integer >= 1, got {self.big_d}")
        if self.d <= self.d_prime:
            raise ParameterError(f"IDR frames must be larger than P frames: d={self.d}, d'={self.d_prime}")

    @property
    def delta_d(self) -> int:
        return self.d - self.d_prime

    @property
    def n_states(self) -> int:
        return self.d + self.d_prime + (self.big_d - 1) * self.d_prime

    @property
    def cycle_packets(self) -> int:
        """Packets of one IDR frame plus the priority-3 tail of a frozen interval."""
        return self.d + (self.big_d - 1) * self.d_prime


@dataclass(frozen=True, slots=True)
class AnalyticParams:
    p: float
    p_tilde: float
    policy: RetryPolicy = RetryPolicy()

    def __post_init__(self) -> None:
        check_probability("p", self.p)
        check_probability("p_tilde", self.p_tilde)
        if self.p > self.p_tilde:
            raise ParameterError(f"p={self.p} must not exceed p_tilde={self.p_tilde}")

    @property
    def p0(self) -> float:
        return ipow(self.p_tilde, self.policy.r_base)

    @property
    def p1(self) -> float:
        return ipow(self.p, self.policy.r1)

    @property
    def p2(self) -> float:
        return ipow(self.p, self.policy.r2)

    @property
    def p3(self) -> float:
        return ipow(self.p, self.policy.r3)


@dataclass(frozen=True, slots=True)
class StationaryDist:
    q_I1: float
    q_N1: float
    q_31: float
    q_I: float
    p_a: float
    p_b: float

    def frame_rate(self, params: VideoModelParams) -> float:
        """Frames completed per packet slot: one at (I,d), one at (N,d') and one per d' priority-3 states."""
        return self.q_I1 + self.q_N1 + (params.big_d - 1) * self.q_31

    def idr_frame_rate(self, params: VideoModelParams) -> float:
        """Fraction of emitted frames that are IDR frames in the stationary regime."""
        if self.q_I1 == 0.0:
            return 0.0
        return self.q_I1 / self.frame_rate(params)

    def to_vector(self, params: VideoModelParams) -> np.ndarray:
        """Expand to the full state vector in (I,·), (N,·), (3,·) order."""
        tail = (params.big_d - 1) * params.d_prime
        return np.concatenate(
            [
                np.full(params.d, self.q_I1),
                np.full(params.d_prime, self.q_N1),
                np.full(tail, self.q_31),
            ]
        )
