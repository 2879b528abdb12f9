from .algorithm import FixedRetryScheduler, RetryScheduler, make_scheduler
from .models import Priority, SchedulerState, WindowMode

__all__ = [
    "FixedRetryScheduler",
    "Priority",
    "RetryScheduler",
    "SchedulerState",
    "WindowMode",
    "make_scheduler",
]
