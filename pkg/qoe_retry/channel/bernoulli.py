from __future__ import annotations

import numpy as np

from ..analytic.models import check_attempts, check_probability
from .models import TxResult


class BernoulliChannel:
    """
    Per-attempt collision channel with a constant, independent failure probability.

    Each packet costs a single geometric draw: the index of the first
    successful attempt, compared against the retry limit.
    """

    def __init__(self, p: float, rng: np.random.Generator | int | None = None):
        check_probability("p", p, upper_open=False)
        self.p = p
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.attempts_total = 0
        self.collisions_total = 0

    @property
    def measured_p(self) -> float:
        return self.collisions_total / self.attempts_total if self.attempts_total else 0.0

    def transmit(self, retry_limit: int, now: float = 0.0) -> TxResult:
        check_attempts("retry_limit", retry_limit)
        if self.p >= 1.0:
            first_success = retry_limit + 1
        elif self.p <= 0.0:
            first_success = 1
        else:
            first_success = int(self.rng.geometric(1.0 - self.p))

        delivered = first_success <= retry_limit
        attempts = first_success if delivered else retry_limit
        self.attempts_total += attempts
        self.collisions_total += attempts - 1 if delivered else attempts
        return TxResult(delivered=delivered, attempts=attempts, completion_time=now)
