#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
QoE Retry Settings Module

Handles environment variable configuration for the command-line harness:
log level, output directory, worker count and the default seed count.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class Settings:
    """Settings loaded from environment variables.

    Environment Variables:
        QOE_RETRY_LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR). Default: INFO
        QOE_RETRY_OUT_DIR: Directory for report files. Default: results
        QOE_RETRY_WORKERS: Worker processes for seed-parallel runs. Default: 1
        QOE_RETRY_DEFAULT_SEEDS: Seed count used when --seeds is omitted. Default: 100
    """

    log_level: LogLevel = field(
        default_factory=lambda: os.getenv("QOE_RETRY_LOG_LEVEL", "INFO").upper()
    )
    out_dir: Path = field(
        default_factory=lambda: Path(os.getenv("QOE_RETRY_OUT_DIR", "results"))
    )
    workers: int = field(
        default_factory=lambda: int(os.getenv("QOE_RETRY_WORKERS", "1"))
    )
    default_seeds: int = field(
        default_factory=lambda: int(os.getenv("QOE_RETRY_DEFAULT_SEEDS", "100"))
    )

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.log_level not in VALID_LOG_LEVELS:
            raise ValueError(
                f"Invalid QOE_RETRY_LOG_LEVEL: '{self.log_level}'. "
                f"Must be one of: {', '.join(VALID_LOG_LEVELS)}"
            )

        if self.workers < 1:
            raise ValueError(
                f"Invalid QOE_RETRY_WORKERS: {self.workers}. Must be at least 1."
            )

        if self.default_seeds < 1:
            raise ValueError(
                f"Invalid QOE_RETRY_DEFAULT_SEEDS: {self.default_seeds}. Must be at least 1."
            )

    def __str__(self) -> str:
        return (
            f"Log level: {self.log_level} | "
            f"Output: {self.out_dir} | "
            f"Workers: {self.workers} | "
            f"Default seeds: {self.default_seeds}"
        )


def get_settings() -> Settings:
    """Get the harness settings from environment variables.

    Returns:
        Settings: The loaded settings

    Raises:
        ValueError: If a setting is invalid
    """
    return Settings()
