"""Clip records, category labels, and JSONL manifest persistence.

A manifest is the unit of resumability: one JSONL file per pipeline stage,
header line first, optionally closed by a terminator line that marks the
stage complete. Records are immutable once written; identical input always
produces byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import ManifestError

SCHEMA_VERSION = 1

# Stage manifests, in pipeline order (name = what the records are after the stage).
MANIFEST_STAGES = ("split", "scored", "filtered", "sampled", "captioned", "final", "finetune")

# Record lifecycle. Transitions only ever move to a later entry.
STATUS_ORDER = (
    "split",
    "scored",
    "scoring_failed",
    "filtered_out",
    "sampled",
    "caption_rejected",
    "final",
    "approved",
    "rejected",
)
_STATUS_RANK = {s: i for i, s in enumerate(STATUS_ORDER)}

# Statuses that must carry a reject_reason (and only these may).
REJECTING_STATUSES = frozenset({"scoring_failed", "filtered_out", "caption_rejected", "rejected"})

YES = "yes"
NO = "no"
UNDETERMINED = "undetermined"
TERNARY_VALUES = (YES, NO, UNDETERMINED)

_TRIAGE_FIELDS = frozenset({"scene_transition", "frame_level", "reduplication"})
_CAPTION_FIELDS = frozenset({"text", "word_count", "decision_source", "triage"})
_SCORE_FIELDS = frozenset(
    {"s_quality", "s_ocr", "s_tc", "s_motion", "category_similarity", "s_align"}
)
_CLIP_FIELDS = frozenset(
    {
        "clip_id", "source_video_id", "start_frame", "end_frame", "fps",
        "width", "height", "status", "reject_reason", "scores", "category",
        "caption",
    }
)


def _check_extra(extra: dict[str, Any], reserved: frozenset[str], owner: str) -> None:
    clash = reserved & extra.keys()
    if clash:
        raise ValueError(f"extra fields on {owner} shadow schema fields: {sorted(clash)}")


class CategoryLabel(str, Enum):
    """The closed 14-tag category set; serialized as the exact strings below."""

    PEOPLE = "People"
    ANIMAL = "Animal"
    PLANTS = "Plants"
    ARCHITECTURE = "Architecture"
    FOOD = "Food"
    VEHICLES = "Vehicles"
    NATURAL_SCENERY = "Natural Scenery"
    URBAN_LANDSCAPE = "Urban landscape"
    OCEAN = "Ocean"
    OUTER_SPACE = "Outer space"
    VIDEO_GAME = "Video game"
    CARTOON_2D = "2D cartoon"
    CARTOON_3D = "3D cartoon"
    TECHNOLOGY = "Technology"


#: Canonical label order, used for tie-breaking and quota remainders.
CATEGORY_LABELS: tuple[CategoryLabel, ...] = tuple(CategoryLabel)


def make_clip_id(source_video_id: str, start_frame: int, end_frame: int) -> str:
    """Content-addressed clip identity: 128-bit hash of (source, frame span).

    Re-splitting the same video yields the same ids, which makes every
    downstream stage idempotent.
    """
    key = f"{source_video_id}:{start_frame}:{end_frame}".encode("utf-8")
    return hashlib.blake2b(key, digest_size=16).hexdigest()


@dataclass(frozen=True)
class TriageResult:
    """Ternary answers to the three caption-failure questions."""

    scene_transition: str = UNDETERMINED
    frame_level: str = UNDETERMINED
    reduplication: str = UNDETERMINED
    extra: dict[str, Any] = field(default_factory=dict, compare=True)

    def __post_init__(self) -> None:
        for name in ("scene_transition", "frame_level", "reduplication"):
            value = getattr(self, name)
            if value not in TERNARY_VALUES:
                raise ValueError(f"triage flag {name!r} must be one of {TERNARY_VALUES}, got {value!r}")
        _check_extra(self.extra, _TRIAGE_FIELDS, "TriageResult")

    @property
    def accepted(self) -> bool:
        # A caption passes only when all three flags are a definite "no".
        return (
            self.scene_transition == NO
            and self.frame_level == NO
            and self.reduplication == NO
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "scene_transition": self.scene_transition,
            "frame_level": self.frame_level,
            "reduplication": self.reduplication,
        }
        for key in sorted(self.extra):
            out[key] = self.extra[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TriageResult":
        known = _TRIAGE_FIELDS
        return cls(
            scene_transition=data.get("scene_transition", UNDETERMINED),
            frame_level=data.get("frame_level", UNDETERMINED),
            reduplication=data.get("reduplication", UNDETERMINED),
            extra={k: v for k, v in data.items() if k not in known},
        )


@dataclass(frozen=True)
class CaptionRecord:
    """A clip's caption text plus its triage outcome."""

    text: str
    word_count: int
    decision_source: str = "heuristic"  # heuristic | llm | human
    triage: TriageResult | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.word_count < 0:
            raise ValueError("word_count must be >= 0")
        if self.decision_source not in ("heuristic", "llm", "human"):
            raise ValueError(f"unknown decision_source {self.decision_source!r}")
        _check_extra(self.extra, _CAPTION_FIELDS, "CaptionRecord")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "text": self.text,
            "word_count": self.word_count,
            "decision_source": self.decision_source,
        }
        if self.triage is not None:
            out["triage"] = self.triage.to_dict()
        for key in sorted(self.extra):
            out[key] = self.extra[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CaptionRecord":
        known = _CAPTION_FIELDS
        triage = data.get("triage")
        return cls(
            text=data["text"],
            word_count=int(data["word_count"]),
            decision_source=data.get("decision_source", "heuristic"),
            triage=TriageResult.from_dict(triage) if triage is not None else None,
            extra={k: v for k, v in data.items() if k not in known},
        )


@dataclass(frozen=True)
class ScoreSet:
    """The five coarse-curation scores plus the optional caption alignment."""

    s_quality: float
    s_ocr: float
    s_tc: float
    s_motion: float
    category_similarity: float
    s_align: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.s_ocr < 0:
            raise ValueError("s_ocr must be non-negative")
        if self.s_motion < 0:
            raise ValueError("s_motion must be non-negative")
        for name in ("s_tc", "category_similarity"):
            value = getattr(self, name)
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [-1, 1], got {value}")
        if self.s_align is not None and not -1.0 <= self.s_align <= 1.0:
            raise ValueError(f"s_align must lie in [-1, 1], got {self.s_align}")
        _check_extra(self.extra, _SCORE_FIELDS, "ScoreSet")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "s_quality": self.s_quality,
            "s_ocr": self.s_ocr,
            "s_tc": self.s_tc,
            "s_motion": self.s_motion,
            "category_similarity": self.category_similarity,
        }
        if self.s_align is not None:
            out["s_align"] = self.s_align
        for key in sorted(self.extra):
            out[key] = self.extra[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScoreSet":
        known = _SCORE_FIELDS
        return cls(
            s_quality=float(data["s_quality"]),
            s_ocr=float(data["s_ocr"]),
            s_tc=float(data["s_tc"]),
            s_motion=float(data["s_motion"]),
            category_similarity=float(data["category_similarity"]),
            s_align=float(data["s_align"]) if "s_align" in data else None,
            extra={k: v for k, v in data.items() if k not in known},
        )


@dataclass(frozen=True)
class ClipRecord:
    """One video clip: identity, frame span, scores, caption, lifecycle status.

    Clips never store video bytes; they reference `source_video_id` plus a
    half-open frame span [start_frame, end_frame). `clip_id` is derived from
    that reference via :func:`make_clip_id`.
    """

    clip_id: str
    source_video_id: str
    start_frame: int
    end_frame: int
    fps: float
    width: int
    height: int
    status: str = "split"
    reject_reason: str | None = None
    scores: ScoreSet | None = None
    category: CategoryLabel | None = None
    caption: CaptionRecord | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.start_frame < 0:
            raise ValueError("start_frame must be >= 0")
        if self.end_frame <= self.start_frame:
            raise ValueError("end_frame must exceed start_frame")
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        if self.status not in _STATUS_RANK:
            raise ValueError(f"unknown status {self.status!r}")
        rejecting = self.status in REJECTING_STATUSES
        if rejecting and not self.reject_reason:
            raise ValueError(f"status {self.status!r} requires a reject_reason")
        if not rejecting and self.reject_reason:
            raise ValueError(f"status {self.status!r} must not carry a reject_reason")
        _check_extra(self.extra, _CLIP_FIELDS, "ClipRecord")

    @property
    def frame_count(self) -> int:
        return self.end_frame - self.start_frame

    @property
    def duration_seconds(self) -> float:
        return self.frame_count / self.fps

    def advance(self, status: str, **changes: Any) -> "ClipRecord":
        """Return a copy with a later status; going backwards is an error."""
        if _STATUS_RANK[status] <= _STATUS_RANK[self.status]:
            raise ValueError(f"illegal status transition {self.status!r} -> {status!r}")
        return replace(self, status=status, **changes)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "clip_id": self.clip_id,
            "source_video_id": self.source_video_id,
            "start_frame": self.start_frame,
            "end_frame": self.end_frame,
            "fps": self.fps,
            "width": self.width,
            "height": self.height,
            "status": self.status,
        }
        if self.reject_reason is not None:
            out["reject_reason"] = self.reject_reason
        if self.scores is not None:
            out["scores"] = self.scores.to_dict()
        if self.category is not None:
            out["category"] = self.category.value
        if self.caption is not None:
            out["caption"] = self.caption.to_dict()
        for key in sorted(self.extra):
            out[key] = self.extra[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ClipRecord":
        known = _CLIP_FIELDS
        scores = data.get("scores")
        caption = data.get("caption")
        category = data.get("category")
        return cls(
            clip_id=data["clip_id"],
            source_video_id=data["source_video_id"],
            start_frame=int(data["start_frame"]),
            end_frame=int(data["end_frame"]),
            fps=float(data["fps"]),
            width=int(data["width"]),
            height=int(data["height"]),
            status=data.get("status", "split"),
            reject_reason=data.get("reject_reason"),
            scores=ScoreSet.from_dict(scores) if scores is not None else None,
            category=CategoryLabel(category) if category is not None else None,
            caption=CaptionRecord.from_dict(caption) if caption is not None else None,
            extra={k: v for k, v in data.items() if k not in known},
        )


def status_rank(status: str) -> int:
    """Position of `status` in the forward-only lifecycle order."""
    return _STATUS_RANK[status]


# ---------------------------------------------------------------------------
# Manifest I/O


def _encode_line(obj: dict[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_manifest(
    records: Sequence[ClipRecord],
    stage_name: str,
    path: str | Path,
    *,
    complete: bool = False,
) -> Path:
    """Write records as a stage manifest, atomically (temp file + rename).

    Records must arrive sorted by clip_id; the same input always yields
    byte-identical files. With ``complete=True`` a terminator line
    ``{"stage_complete":true,"count":N}`` closes the file, which is what
    marks the stage as done for resumption purposes.
    """
    if stage_name not in MANIFEST_STAGES:
        raise ManifestError(f"unknown stage name {stage_name!r}")
    for prev, cur in zip(records, records[1:]):
        if prev.clip_id >= cur.clip_id:
            raise ManifestError(
                f"unsorted input: {cur.clip_id} follows {prev.clip_id} in stage {stage_name!r}"
            )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [_encode_line({"schema_version": SCHEMA_VERSION, "stage": stage_name})]
    lines.extend(_encode_line(record.to_dict()) for record in records)
    if complete:
        lines.append(_encode_line({"stage_complete": True, "count": len(records)}))
    payload = "\n".join(lines) + "\n"

    fd, tmp_name = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return path


@dataclass(frozen=True)
class ManifestInfo:
    """Parsed manifest: stage name, records, and completion state."""

    stage: str
    records: tuple[ClipRecord, ...]
    complete: bool


def read_manifest_info(path: str | Path) -> ManifestInfo:
    """Parse a manifest file fully, validating header, lines, and terminator."""
    path = Path(path)
    records: list[ClipRecord] = []
    stage = ""
    complete = False
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            if complete:
                raise ManifestError(f"{path}: content after terminator at line {lineno}")
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}: malformed line {lineno}: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ManifestError(f"{path}: malformed line {lineno}: expected object")
            if lineno == 1:
                version = obj.get("schema_version")
                if version != SCHEMA_VERSION:
                    raise ManifestError(
                        f"{path}: schema_version mismatch: expected {SCHEMA_VERSION}, got {version!r}"
                    )
                stage = obj.get("stage", "")
                continue
            if obj.get("stage_complete") is True:
                count = obj.get("count")
                if count != len(records):
                    raise ManifestError(
                        f"{path}: terminator count {count!r} != {len(records)} records"
                    )
                complete = True
                continue
            try:
                records.append(ClipRecord.from_dict(obj))
            except (KeyError, ValueError, TypeError) as exc:
                raise ManifestError(f"{path}: malformed line {lineno}: {exc}") from exc
    if stage == "" and not records and not complete:
        raise ManifestError(f"{path}: missing header line")
    return ManifestInfo(stage=stage, records=tuple(records), complete=complete)


def read_manifest(path: str | Path) -> list[ClipRecord]:
    """Read a manifest's records; round-trips :func:`write_manifest` exactly."""
    return list(read_manifest_info(path).records)


def manifest_is_complete(path: str | Path) -> bool:
    """True iff the file exists and carries a valid terminator record."""
    path = Path(path)
    if not path.is_file():
        return False
    try:
        return read_manifest_info(path).complete
    except ManifestError:
        return False


# ---------------------------------------------------------------------------
# Distribution report

#: report dimension -> ScoreSet attribute
REPORT_DIMENSIONS = {
    "aesthetic": "s_quality",
    "motion": "s_motion",
    "ocr": "s_ocr",
    "tc": "s_tc",
}


def _histogram(values: list[float], edges: Sequence[float]) -> list[int]:
    # Values are clamped into [edges[0], edges[-1]] so every record counts.
    counts = [0] * (len(edges) - 1)
    lo, hi = edges[0], edges[-1]
    for value in values:
        v = min(max(value, lo), hi)
        # rightmost bin is closed on both sides
        for i in range(len(edges) - 1):
            if v < edges[i + 1] or i == len(edges) - 2:
                counts[i] += 1
                break
    return counts


def _manifest_stats(records: Iterable[ClipRecord], bins: dict[str, Sequence[float]]) -> dict[str, Any]:
    records = list(records)
    scored = [r for r in records if r.scores is not None]
    histograms = {}
    for dimension, attr in REPORT_DIMENSIONS.items():
        edges = list(bins[dimension])
        values = [getattr(r.scores, attr) for r in scored]
        histograms[dimension] = {"edges": edges, "counts": _histogram(values, edges)}
    categories = {label.value: 0 for label in CATEGORY_LABELS}
    for record in records:
        if record.category is not None:
            categories[record.category.value] += 1
    return {
        "records": len(records),
        "scored_records": len(scored),
        "histograms": histograms,
        "categories": categories,
    }


def distribution_report(
    before_path: str | Path,
    after_path: str | Path,
    bins: dict[str, Sequence[float]],
    out_dir: str | Path,
) -> dict[str, Any]:
    """Compare score distributions before/after curation.

    Emits ``report.json`` plus one ``report_<dimension>.csv`` per histogram
    dimension and ``report_category.csv``; returns the report document.
    """
    before = read_manifest(before_path)
    after = read_manifest(after_path)
    report = {
        "schema_version": SCHEMA_VERSION,
        "before": _manifest_stats(before, bins),
        "after": _manifest_stats(after, bins),
    }
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "report.json", "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report, handle, ensure_ascii=False, indent=2)
        handle.write("\n")
    for dimension in REPORT_DIMENSIONS:
        edges = report["before"]["histograms"][dimension]["edges"]
        rows = zip(
            edges[:-1],
            edges[1:],
            report["before"]["histograms"][dimension]["counts"],
            report["after"]["histograms"][dimension]["counts"],
        )
        with open(out_dir / f"report_{dimension}.csv", "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["bin_lo", "bin_hi", "before", "after"])
            writer.writerows(rows)
    with open(out_dir / "report_category.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["category", "before", "after"])
        for label in CATEGORY_LABELS:
            writer.writerow([
                label.value,
                report["before"]["categories"][label.value],
                report["after"]["categories"][label.value],
            ])
    return report
