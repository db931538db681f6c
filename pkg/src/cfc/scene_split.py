"""Shot-boundary detection and single-scene clip emission.

Content detection runs on per-frame mean-HSV metrics produced by a decode
shim. Splitting is a two-pass cascade: a coarse threshold finds hard cuts,
then segments still longer than twice the minimum scene length are rescanned
with a finer threshold. Cuts landing too close to an earlier cut are
suppressed, and scenes longer than the clip-duration cap are chopped into
equal pieces.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .catalog import ClipRecord, make_clip_id


@dataclass(frozen=True)
class FrameMetric:
    """Mean H, S, V of one frame, each scaled to [0, 255]."""

    frame_index: int
    hsv_mean: tuple[float, float, float]

    def __post_init__(self) -> None:
        if not all(0.0 <= c <= 255.0 for c in self.hsv_mean):
            raise ValueError("hsv_mean components must lie in [0, 255]")


@dataclass(frozen=True)
class SplitParams:
    threshold_coarse: float = 35.0
    threshold_fine: float = 27.0
    min_scene_frames: int = 15
    max_clip_seconds: float = 20.0

    def __post_init__(self) -> None:
        if self.threshold_coarse <= 0 or self.threshold_fine <= 0:
            raise ValueError("thresholds must be positive")
        if self.threshold_fine > self.threshold_coarse:
            raise ValueError("threshold_fine must not exceed threshold_coarse")
        if self.min_scene_frames < 1:
            raise ValueError("min_scene_frames must be >= 1")
        if self.max_clip_seconds <= 0:
            raise ValueError("max_clip_seconds must be positive")


def content_delta(a: FrameMetric, b: FrameMetric) -> float:
    """Mean absolute difference of the HSV components."""
    return (
        abs(a.hsv_mean[0] - b.hsv_mean[0])
        + abs(a.hsv_mean[1] - b.hsv_mean[1])
        + abs(a.hsv_mean[2] - b.hsv_mean[2])
    ) / 3.0


def detect_boundaries(metrics: Sequence[FrameMetric], params: SplitParams) -> list[int]:
    """Cascaded cut detection; returns sorted boundary frame indices.

    A boundary at frame f means the cut sits between f-1 and f: no emitted
    clip ever spans it.
    """
    n = len(metrics)
    if n < 2:
        return []
    for prev, cur in zip(metrics, metrics[1:]):
        if cur.frame_index != prev.frame_index + 1:
            raise ValueError("metrics must be contiguous and ordered by frame_index")

    deltas = [0.0] * n  # deltas[i] compares metrics[i-1] and metrics[i]
    for i in range(1, n):
        deltas[i] = content_delta(metrics[i - 1], metrics[i])

    coarse = [i for i in range(1, n) if deltas[i] >= params.threshold_coarse]

    candidates = set(coarse)
    starts = [0] + coarse
    ends = coarse + [n]
    rescan_limit = 2 * params.min_scene_frames
    for seg_start, seg_end in zip(starts, ends):
        if seg_end - seg_start > rescan_limit:
            for i in range(seg_start + 1, seg_end):
                if deltas[i] >= params.threshold_fine:
                    candidates.add(i)

    kept: list[int] = []
    for i in sorted(candidates):
        frame = metrics[i].frame_index
        if not kept or frame - kept[-1] >= params.min_scene_frames:
            kept.append(frame)
    return kept


def _chop_lengths(length: int, fps: float, max_clip_seconds: float) -> list[int]:
    # Equal pieces, each within the duration cap. floor() keeps every piece
    # under the cap even when max_clip_seconds * fps is fractional.
    cap = max(1, math.floor(max_clip_seconds * fps))
    pieces = max(1, math.ceil(length / cap))
    base, extra = divmod(length, pieces)
    return [base + (1 if i < extra else 0) for i in range(pieces)]


def split_to_clips(
    source_video_id: str,
    metrics: Sequence[FrameMetric],
    fps: float,
    params: SplitParams,
    *,
    width: int,
    height: int,
) -> list[ClipRecord]:
    """Tile the frame range into single-scene clips.

    Segments (or chop leftovers) shorter than min_scene_frames are not
    silently discarded: they come back as records with status
    ``filtered_out`` and reason ``too_short``, so kept + dropped always
    tiles the full input range.
    """
    if not metrics:
        return []
    boundaries = detect_boundaries(metrics, params)
    first = metrics[0].frame_index
    last = metrics[-1].frame_index + 1
    edges = [first] + boundaries + [last]

    def _record(start: int, end: int) -> ClipRecord:
        too_short = end - start < params.min_scene_frames
        return ClipRecord(
            clip_id=make_clip_id(source_video_id, start, end),
            source_video_id=source_video_id,
            start_frame=start,
            end_frame=end,
            fps=fps,
            width=width,
            height=height,
            status="filtered_out" if too_short else "split",
            reject_reason="too_short" if too_short else None,
        )

    clips: list[ClipRecord] = []
    for seg_start, seg_end in zip(edges, edges[1:]):
        length = seg_end - seg_start
        if length < params.min_scene_frames:
            clips.append(_record(seg_start, seg_end))
            continue
        cursor = seg_start
        for piece in _chop_lengths(length, fps, params.max_clip_seconds):
            clips.append(_record(cursor, cursor + piece))
            cursor += piece
    return clips


# ---------------------------------------------------------------------------
# Metric-file input (decode-shim output)


@dataclass(frozen=True)
class VideoMetrics:
    """One video's decode-shim output: identity, geometry, per-frame metrics."""

    source_video_id: str
    fps: float
    width: int
    height: int
    metrics: tuple[FrameMetric, ...]


def load_video_metrics(path: str | Path) -> VideoMetrics:
    """Load a frame-metric file: a JSON object with a ``metrics`` array."""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    metrics = tuple(
        FrameMetric(frame_index=int(m[0]), hsv_mean=(float(m[1]), float(m[2]), float(m[3])))
        for m in data["metrics"]
    )
    return VideoMetrics(
        source_video_id=data["source_video_id"],
        fps=float(data["fps"]),
        width=int(data["width"]),
        height=int(data["height"]),
        metrics=metrics,
    )


def split_video_file(path: str | Path, params: SplitParams) -> list[ClipRecord]:
    video = load_video_metrics(path)
    return split_to_clips(
        video.source_video_id,
        video.metrics,
        video.fps,
        params,
        width=video.width,
        height=video.height,
    )
