"""
Exception hierarchy shared by the analytic model, scheduler, channels and harness.
"""

from __future__ import annotations


class QoeRetryError(Exception):
    pass


class ParameterError(QoeRetryError, ValueError):
    """A precondition on an input value was violated."""


class NonConvergentParameterError(ParameterError):
    def __init__(self, message: str, product: float):
        self.product = product
        super().__init__(message)


class ConvergenceError(QoeRetryError):
    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")):
        self.iterations = iterations
        self.residual = residual
        super().__init__(message)


class TransmissionResultError(QoeRetryError, ValueError):
    pass


class IngestOrderError(QoeRetryError):
    pass


class UnknownStationError(QoeRetryError, KeyError):
    def __init__(self, station: int):
        self.station = station
        super().__init__(f"Unknown station: {station}")

    def __str__(self) -> str:
        return f"Unknown station: {self.station}"


class ConfigError(QoeRetryError):
    pass


class GateFailure(QoeRetryError):
    def __init__(self, message: str, failed: list[str] | None = None):
        self.failed = failed or []
        super().__init__(message)
