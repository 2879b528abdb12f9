"""
Frame-size sources for the encoder.

Synthetic sources return constant IDR and P sizes. Trace sources read
per-frame sizes from a ``frame_index,kind,bytes`` text file and are
consumed cyclically when the run is longer than the trace.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import pandas as pd

from ..errors import ConfigError
from .models import FrameKind

logger = logging.getLogger("qoe-retry.traces")

TRACE_COLUMNS = ["frame_index", "kind", "bytes"]


class FrameSizeProvider(Protocol):
    def size_for(self, index: int, kind: FrameKind) -> int: ...


@dataclass(frozen=True, slots=True)
class VideoPreset:
    name: str
    fps: float
    n_frames: int
    idr_bytes: int = 23040
    p_bytes: int = 4608


VIDEO_PRESETS: dict[str, VideoPreset] = {
    "foreman": VideoPreset(name="foreman", fps=30.0, n_frames=295),
    "basketball": VideoPreset(name="basketball", fps=60.0, n_frames=300),
}


def get_preset(name: str) -> VideoPreset:
    try:
        return VIDEO_PRESETS[name.lower()]
    except KeyError as exc:
        raise ConfigError(
            f"Unknown video preset: '{name}'. Must be one of: {', '.join(sorted(VIDEO_PRESETS))}"
        ) from exc


@dataclass(frozen=True, slots=True)
class SyntheticSizes:
    idr_bytes: int
    p_bytes: int

    def size_for(self, index: int, kind: FrameKind) -> int:
        return self.idr_bytes if kind is FrameKind.IDR else self.p_bytes


@dataclass(frozen=True, slots=True)
class TraceRecord:
    frame_index: int
    kind: FrameKind
    size: int


class TraceSizes:
    """
    Trace-backed sizes with sequence switching.

    An IDR inserted at any index takes the size of the trace's first I
    record. A P frame takes the record at its index; if that record is an
    I record the next P record (cyclically) is used instead.
    """

    def __init__(self, records: list[TraceRecord]):
        if not records:
            raise ConfigError("Trace has no frame records")
        self.records = records
        idr_sizes = [record.size for record in records if record.kind is FrameKind.IDR]
        p_sizes = [record.size for record in records if record.kind is FrameKind.P]
        if not idr_sizes or not p_sizes:
            raise ConfigError("Trace needs at least one I record and one P record")
        self.idr_bytes = idr_sizes[0]

    def __len__(self) -> int:
        return len(self.records)

    def size_for(self, index: int, kind: FrameKind) -> int:
        if kind is FrameKind.IDR:
            return self.idr_bytes
        position = index % len(self.records)
        while self.records[position].kind is not FrameKind.P:
            position = (position + 1) % len(self.records)
        return self.records[position].size


def load_trace(path: str | Path) -> TraceSizes:
    """
    Parse a frame-size trace.

    Lines are ``frame_index,kind,bytes`` with kind I or P; blank lines and
    lines starting with ``#`` are skipped.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    trace_path = Path(path)
    if not trace_path.exists():
        raise ConfigError(f"Trace file not found: {trace_path}")

    try:
        frame = pd.read_csv(
            trace_path,
            header=None,
            names=TRACE_COLUMNS,
            comment="#",
            skip_blank_lines=True,
            skipinitialspace=True,
            dtype={"frame_index": "int64", "kind": "string", "bytes": "int64"},
        )
    except (ValueError, pd.errors.ParserError) as exc:
        raise ConfigError(f"Malformed trace {trace_path}: {exc}") from exc

    records: list[TraceRecord] = []
    for row in frame.itertuples(index=False):
        kind_text = str(row.kind).strip().upper()
        if kind_text not in ("I", "P"):
            raise ConfigError(f"Trace {trace_path}: invalid frame kind '{row.kind}' at frame {row.frame_index}")
        if row.bytes <= 0:
            raise ConfigError(f"Trace {trace_path}: frame {row.frame_index} has non-positive size")
        records.append(TraceRecord(int(row.frame_index), FrameKind(kind_text), int(row.bytes)))

    records.sort(key=lambda record: record.frame_index)
    logger.debug(f"Loaded {len(records)} trace records from {trace_path}")
    return TraceSizes(records)
