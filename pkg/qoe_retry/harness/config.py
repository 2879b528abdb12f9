"""
Run configuration models.

A RunConfig describes one closed-loop session: which channel backend,
which retry-limit method, the video source, the feedback timing and the
seed. Files are JSON documents with the same field names.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..analytic import RetryPolicy, collision_for_loss_rate, frozen_interval_frames
from ..channel.models import DcfConfig
from ..errors import ConfigError, ParameterError
from ..scheduler import WindowMode
from ..video.traces import VIDEO_PRESETS, FrameSizeProvider, SyntheticSizes, load_trace

logger = logging.getLogger("qoe-retry.config")

RunMode = Literal["abstract", "dcf"]
Method = Literal["baseline", "proposed"]


class RetryPolicyConfig(BaseModel):
    r1: int = Field(default=8, description="Retry limit of priority-1 packets")
    r2: int = Field(default=7, description="Retry limit of priority-2 packets")
    r3: int = Field(default=1, description="Retry limit of priority-3 packets")
    r_base: int = Field(default=7, description="Fixed retry limit of the unmodified MAC")

    @model_validator(mode="after")
    def _check_policy(self) -> "RetryPolicyConfig":
        self.to_policy()
        return self

    def to_policy(self) -> RetryPolicy:
        try:
            return RetryPolicy(r1=self.r1, r2=self.r2, r3=self.r3, r_base=self.r_base)
        except ParameterError as exc:
            raise ValueError(str(exc)) from exc


class VideoConfig(BaseModel):
    preset: str | None = Field(default=None, description="Named sequence preset (foreman, basketball)")
    fps: float = Field(default=30.0, gt=0, description="Frame rate")
    n_frames: int = Field(default=295, ge=1, description="Frames per session")
    idr_bytes: int = Field(default=23040, gt=0, description="Synthetic IDR frame size")
    p_bytes: int = Field(default=4608, gt=0, description="Synthetic P frame size")
    mtu_payload: int = Field(default=2304, gt=0, description="MSDU payload size")
    trace: str | None = Field(default=None, description="Frame-size trace file")

    @model_validator(mode="before")
    @classmethod
    def _apply_preset(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("preset"):
            name = str(data["preset"]).lower()
            if name not in VIDEO_PRESETS:
                raise ValueError(f"Unknown video preset: '{data['preset']}'")
            preset = VIDEO_PRESETS[name]
            data = {
                "fps": preset.fps,
                "n_frames": preset.n_frames,
                "idr_bytes": preset.idr_bytes,
                "p_bytes": preset.p_bytes,
                **data,
            }
        return data

    def size_provider(self) -> FrameSizeProvider:
        if self.trace:
            return load_trace(self.trace)
        return SyntheticSizes(self.idr_bytes, self.p_bytes)


class TimingConfig(BaseModel):
    rtt_ms: float = Field(default=100.0, ge=0, description="Round trip time of the feedback path")
    detection_delay_ms: float = Field(default=0.0, ge=0, description="Receiver loss-detection latency")

    @property
    def feedback_delay_ms(self) -> float:
        return self.rtt_ms + self.detection_delay_ms


class ChannelConfig(BaseModel):
    p: float | None = Field(default=0.45, ge=0, le=1, description="Per-attempt collision probability")
    loss_rate: float | None = Field(
        default=None, ge=0, lt=1, description="Baseline packet loss rate; overrides p when set"
    )
    dcf: DcfConfig | None = Field(default=None, description="Multi-station DCF network")


class WindowConfig(BaseModel):
    mode: Literal["cumulative", "sliding"] = Field(default="cumulative")
    window_packets: int | None = Field(default=None, ge=1)
    reset_attempts: bool = Field(default=False)

    def to_window_mode(self) -> WindowMode:
        return WindowMode(mode=self.mode, window_packets=self.window_packets, reset_attempts=self.reset_attempts)


class RunConfig(BaseModel):
    name: str = Field(default="default", description="Scenario label used in reports")
    mode: RunMode = Field(default="abstract", description="Channel backend")
    method: Method = Field(default="proposed", description="Retry-limit method of the video sender")
    policy: RetryPolicyConfig = Field(default_factory=RetryPolicyConfig)
    video: VideoConfig = Field(default_factory=VideoConfig)
    timing: TimingConfig = Field(default_factory=TimingConfig)
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    seed: int = Field(default=0, ge=0)
    window_mode: WindowConfig = Field(default_factory=WindowConfig)
    reset_interval_frames: int | None = Field(default=None, ge=1)
    drain_cap_ms: float = Field(default=2000.0, ge=0, description="DCF mode: time allowed to flush after the last frame")

    @model_validator(mode="after")
    def _check_mode(self) -> "RunConfig":
        if self.mode == "dcf":
            if self.channel.dcf is None:
                raise ValueError("dcf mode needs channel.dcf")
            roles = [station.role for station in self.channel.dcf.stations]
            if roles.count("video") != 1:
                raise ValueError("dcf mode needs exactly one video station")
        elif self.channel.loss_rate is None and self.channel.p is None:
            raise ValueError("abstract mode needs channel.p or channel.loss_rate")
        if self.window_mode.mode == "sliding" and self.window_mode.window_packets is None:
            raise ValueError("sliding window mode needs window_packets")
        return self

    @property
    def collision_probability(self) -> float:
        if self.channel.loss_rate is not None:
            return collision_for_loss_rate(self.channel.loss_rate, self.policy.r_base)
        return float(self.channel.p)

    @property
    def big_d(self) -> int:
        return frozen_interval_frames(self.timing.feedback_delay_ms, self.video.fps)

    def retry_policy(self) -> RetryPolicy:
        return self.policy.to_policy()

    def with_method(self, method: Method) -> "RunConfig":
        return self.model_copy(update={"method": method})

    def with_seed(self, seed: int) -> "RunConfig":
        return self.model_copy(update={"seed": seed})


def build_run_config(data: dict[str, Any]) -> RunConfig:
    """
    Validate a config mapping.

    Raises:
        ConfigError: If validation fails
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid run config: {exc}") from exc


def load_run_config(path: str | Path) -> RunConfig:
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")
    try:
        config = RunConfig.model_validate_json(config_path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise ConfigError(f"Invalid run config {config_path}: {exc}") from exc
    logger.debug(f"Loaded run config '{config.name}' from {config_path}")
    return config


def apply_overrides(config: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """
    Return a copy of config with sweep-grid overrides applied.

    Supported keys: p, loss_rate, rtt_ms, policy, saturated_stations, method, seed.
    """
    data = config.model_dump()
    for key, value in overrides.items():
        if key == "p":
            data["channel"]["p"] = value
            data["channel"]["loss_rate"] = None
        elif key == "loss_rate":
            data["channel"]["loss_rate"] = value
        elif key == "rtt_ms":
            data["timing"]["rtt_ms"] = value
        elif key == "policy":
            r1, r2, r3 = parse_policy(value)
            data["policy"].update({"r1": r1, "r2": r2, "r3": r3, "r_base": r2})
        elif key == "saturated_stations":
            if data["channel"]["dcf"] is None:
                raise ConfigError("saturated_stations needs a dcf channel")
            stations = [s for s in data["channel"]["dcf"]["stations"] if s["role"] != "saturated"]
            template = next(
                (s for s in data["channel"]["dcf"]["stations"] if s["role"] == "saturated"),
                {"role": "saturated", "packet_bytes": 1500, "rate_pps": None, "interval_ms": None, "retry_limit": 7},
            )
            stations.extend(dict(template) for _ in range(int(value)))
            data["channel"]["dcf"]["stations"] = stations
        elif key in ("method", "seed"):
            data[key] = value
        else:
            raise ConfigError(f"Unknown sweep dimension: '{key}'")
    return build_run_config(data)


def parse_policy(value: Any) -> tuple[int, int, int]:
    if isinstance(value, str):
        parts = [part for part in value.replace("/", ",").split(",") if part.strip()]
    else:
        parts = list(value)
    if len(parts) != 3:
        raise ConfigError(f"Policy must have three retry limits, got {value!r}")
    try:
        return tuple(int(part) for part in parts)  # type: ignore[return-value]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Policy limits must be integers, got {value!r}") from exc
