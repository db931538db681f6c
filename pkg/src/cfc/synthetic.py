"""Deterministic synthetic corpus: procedural videos, metrics, captions.

Every video is a compact JSON spec of piecewise-constant color segments with
optional color drift (low temporal consistency), a static noise texture of
configurable amplitude (controls the entropy-based aesthetic score), integer
texture motion (controls flow), and OCR overlay annotations. Frames render
on demand from the spec, so no video bytes are stored; the same seed always
regenerates byte-identical corpus files.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import caption_curation as cc
from .catalog import ClipRecord
from .scene_split import SplitParams, split_to_clips, FrameMetric

VIRTUAL_SIZE = 32  # render grid; real size = VIRTUAL_SIZE * scale


def _derive_seed(*parts: object) -> int:
    key = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def mean_hsv(frame: np.ndarray) -> tuple[float, float, float]:
    """Mean H, S, V over pixels, each scaled to [0, 255]."""
    rgb = frame.astype(np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    diff = mx - mn
    h = np.zeros_like(mx)
    mask = diff > 0
    rm = mask & (mx == r)
    h[rm] = ((g[rm] - b[rm]) / diff[rm]) % 6.0
    gm = mask & (mx == g) & ~rm
    h[gm] = (b[gm] - r[gm]) / diff[gm] + 2.0
    bm = mask & (mx == b) & ~rm & ~gm
    h[bm] = (r[bm] - g[bm]) / diff[bm] + 4.0
    h /= 6.0
    s = np.where(mx > 0, diff / np.maximum(mx, 1e-12), 0.0)
    return (float(h.mean() * 255), float(s.mean() * 255), float(mx.mean() * 255))


@lru_cache(maxsize=512)
def _noise_pattern(seed: int, amp: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(-amp, amp + 1, size=(VIRTUAL_SIZE, VIRTUAL_SIZE, 3)).astype(np.float64)


def _render_segment_frame(segment: dict, frame_index: int) -> np.ndarray:
    """Render one 32x32 frame of a segment spec."""
    t = frame_index - segment["start"]
    color = np.asarray(segment["color"], dtype=np.float64)
    drift_to = segment.get("drift_to")
    if drift_to is not None:
        span = max(1, segment["end"] - 1 - segment["start"])
        color = color + (np.asarray(drift_to, dtype=np.float64) - color) * (t / span)
    base = np.ones((VIRTUAL_SIZE, VIRTUAL_SIZE, 3)) * color
    amp = int(segment.get("noise_amp", 0))
    if amp > 0:
        pattern = _noise_pattern(int(segment["noise_seed"]), amp)
        vy, vx = segment.get("motion", [0.0, 0.0])
        pattern = np.roll(pattern, (round(vy * t), round(vx * t)), axis=(0, 1))
        base = base + pattern
    return np.clip(np.rint(base), 0, 255).astype(np.uint8)


class SyntheticFrameStore:
    """FrameStore that renders frames from video spec files on demand."""

    def __init__(self, videos_dir: str | Path):
        self._dir = Path(videos_dir)
        self._specs: dict[str, dict] = {}

    def _spec(self, video_id: str) -> dict:
        spec = self._specs.get(video_id)
        if spec is None:
            with open(self._dir / f"{video_id}.json", "r", encoding="utf-8") as handle:
                spec = json.load(handle)
            self._specs[video_id] = spec
        return spec

    def render_virtual(self, video_id: str, frame_index: int) -> np.ndarray:
        """Render the 32x32 base frame (before upscaling)."""
        spec = self._spec(video_id)
        for seg in spec["segments"]:
            if seg["start"] <= frame_index < seg["end"]:
                return _render_segment_frame(seg, frame_index)
        raise IndexError(f"frame {frame_index} outside {video_id}")

    def get_frame(self, source_video_id: str, frame_index: int) -> np.ndarray:
        frame = self.render_virtual(source_video_id, frame_index)
        scale = int(self._spec(source_video_id).get("scale", 1))
        if scale == 1:
            return frame
        return np.kron(frame, np.ones((scale, scale, 1), dtype=np.uint8))


# ---------------------------------------------------------------------------
# Corpus generation

# well-separated base colors (consecutive palette entries differ strongly in HSV)
_PALETTE = [
    (200, 40, 40),    # red
    (40, 90, 200),    # blue
    (240, 210, 60),   # yellow
    (40, 160, 70),    # green
    (150, 60, 190),   # purple
    (245, 140, 30),   # orange
    (60, 200, 200),   # cyan
    (200, 60, 150),   # magenta
    (120, 120, 120),  # gray
    (70, 45, 25),     # brown
]

_ADJECTIVES = (
    "young", "elderly", "cheerful", "quiet", "tall", "curious", "tired",
    "focused", "patient", "busy", "gentle", "skilled",
)
_SUBJECTS = (
    "chef", "dancer", "farmer", "painter", "cyclist", "musician", "teacher",
    "athlete", "fisherman", "carpenter", "photographer", "gardener",
)
_VERBS = (
    "walks", "strolls", "jogs", "glides", "wanders", "marches", "climbs",
    "leaps", "kneels", "stretches", "waves", "spins",
)
_OBJECTS = (
    "basket", "lantern", "ladder", "bucket", "guitar", "kettle", "canvas",
    "bicycle", "telescope", "umbrella", "barrel", "rope",
)
_PLACES = (
    "meadow", "harbor", "courtyard", "kitchen", "orchard", "plaza",
    "workshop", "garden", "riverbank", "market", "hillside", "shoreline",
)


def _clean_caption(rng: random.Random) -> str:
    adj = rng.choice(_ADJECTIVES)
    subject = rng.choice(_SUBJECTS)
    verb = rng.choice(_VERBS)
    place = rng.choice(_PLACES)
    obj = rng.choice(_OBJECTS)
    verb2 = rng.choice(_VERBS)
    subject2 = rng.choice(_SUBJECTS)
    closing = rng.choice(
        (
            f"Sunlight settles over the {rng.choice(_PLACES)} as the moment unfolds.",
            f"A {rng.choice(_OBJECTS)} rests beside a weathered {rng.choice(_OBJECTS)}.",
            f"Nearby, a {rng.choice(_SUBJECTS)} {rng.choice(_VERBS)} without hurry.",
        )
    )
    return (
        f"A {adj} {subject} {verb} across the {place} carrying a {obj}. "
        f"Moments later the {subject2} {verb2} toward a distant {rng.choice(_PLACES)}. "
        f"{closing}"
    )


def _redup_caption(rng: random.Random) -> str:
    subject = rng.choice(_SUBJECTS)
    verb = rng.choice(_VERBS)
    obj = rng.choice(_OBJECTS)
    if rng.random() < 0.5:
        # a trigram repeated three times back to back
        loop = f"the {subject} {verb} " * 3
        return f"A {subject} appears holding a {obj} and then {loop.strip()} endlessly."
    sentence = f"The {subject} {verb} near the {obj}."
    return f"A scene opens inside a {rng.choice(_PLACES)}. {sentence} {sentence}"


def _frame_level_caption(rng: random.Random) -> str:
    subject = rng.choice(_SUBJECTS)
    obj = rng.choice(_OBJECTS)
    cue_pairs = (
        ("In the first frame", "In the second frame"),
        ("In the first frame", "In the next frame"),
        ("The first image shows", "The second image shows"),
        ("In this frame", "In this frame"),
    )
    a, b = rng.choice(cue_pairs)
    return (
        f"{a} a {subject} stands beside a {obj}. "
        f"{b} the {subject} reaches toward the {rng.choice(_OBJECTS)}."
    )


def _scene_transition_caption(rng: random.Random) -> str:
    subject = rng.choice(_SUBJECTS)
    place = rng.choice(_PLACES)
    place2 = rng.choice(_PLACES)
    cue = rng.choice(
        (
            f"The scene changes to a {place2} at dusk.",
            f"The scene shifts toward a crowded {place2}.",
            f"It then cuts to a closeup of the {subject}.",
            f"The camera switches to a {place2} in the rain.",
        )
    )
    return f"A {subject} works quietly in the {place}. {cue}"


@dataclass(frozen=True)
class CorpusPaths:
    root: Path
    videos_dir: Path
    metrics_dir: Path
    ocr_sidecar: Path
    captions_file: Path
    config_file: Path
    clip_count: int


def generate_corpus(
    out_dir: str | Path,
    seed: int = 7,
    n_videos: int = 20,
    segments_per_video: int = 10,
    segment_frames: int = 100,
    fps: float = 10.0,
    sample_target: int = 60,
    align_min: float = 0.05,
) -> CorpusPaths:
    """Write a complete synthetic corpus under `out_dir`.

    The default geometry yields exactly n_videos * segments_per_video kept
    clips after scene splitting (segments are scene-length and under the
    clip-duration cap), which the generator asserts.
    """
    out_dir = Path(out_dir)
    videos_dir = out_dir / "videos"
    metrics_dir = out_dir / "metrics"
    videos_dir.mkdir(parents=True, exist_ok=True)
    metrics_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(_derive_seed(seed, "corpus"))
    # scale controls how far block-matching displacements translate into
    # source pixels: scale-5 videos can exceed the motion ceiling.
    scales = [1, 2, 5]
    ocr_sidecar: dict[str, dict[str, int]] = {}
    split_params = SplitParams()
    all_clips: list[ClipRecord] = []

    # every emitted join must clear the coarse threshold with headroom
    join_margin = split_params.threshold_coarse + 10.0

    for v in range(n_videos):
        video_id = f"video_{v:03d}"
        scale = scales[v % len(scales)]
        segments: list[dict] = []
        prev_end_hsv: tuple[float, float, float] | None = None
        for s in range(segments_per_video):
            quality = rng.random()
            if quality < 0.15:
                amp = 8    # flat: low aesthetic
            elif quality < 0.60:
                amp = 56   # textured: mid aesthetic
            else:
                amp = 96   # rich: high aesthetic
            motion_kind = rng.random()
            if motion_kind < 0.15:
                motion = [0.0, 0.0]
            elif motion_kind < 0.55:
                motion = [0.0, 0.02]
            elif motion_kind < 0.85:
                motion = [0.0, 0.05]
            else:
                motion = [0.08, 0.08]  # extreme on large-scale videos
            drift = rng.random() < 0.18
            overlay = rng.choice((0, 0, 0, 0, 0, 2, 3, 4)) if rng.random() < 0.35 else 0
            start = s * segment_frames
            end = start + segment_frames

            # pick the first palette color whose rendered first frame sits far
            # enough (mean-HSV) from the previous segment's rendered last frame
            candidates = list(range(len(_PALETTE)))
            rng.shuffle(candidates)
            chosen = None
            for idx in candidates:
                color = _PALETTE[idx]
                segment = {
                    "start": start,
                    "end": end,
                    "color": list(color),
                    "drift_to": [max(0, 255 - c - 60) for c in color] if drift else None,
                    "noise_amp": amp,
                    "noise_seed": _derive_seed(seed, video_id, s, "noise"),
                    "motion": [0.0, 0.0] if drift else motion,
                    "overlay": overlay,
                }
                if prev_end_hsv is None:
                    chosen = segment
                    break
                first_hsv = mean_hsv(_render_segment_frame(segment, start))
                delta = sum(abs(a - b) for a, b in zip(first_hsv, prev_end_hsv)) / 3.0
                if delta >= join_margin:
                    chosen = segment
                    break
            if chosen is None:
                raise RuntimeError(f"{video_id}: no palette color clears the join threshold")
            segments.append(chosen)
            prev_end_hsv = mean_hsv(_render_segment_frame(chosen, end - 1))
            if overlay > 0:
                ocr_sidecar.setdefault(video_id, {})
                for t in range(start, end):
                    ocr_sidecar[video_id][str(t)] = overlay
        spec = {
            "source_video_id": video_id,
            "fps": fps,
            "scale": scale,
            "segments": segments,
        }
        with open(videos_dir / f"{video_id}.json", "w", encoding="utf-8", newline="\n") as handle:
            json.dump(spec, handle, ensure_ascii=False, indent=1)
            handle.write("\n")

    store = SyntheticFrameStore(videos_dir)
    for v in range(n_videos):
        video_id = f"video_{v:03d}"
        total = segments_per_video * segment_frames
        metrics_rows = []
        metrics = []
        for t in range(total):
            h, s_, val = mean_hsv(store.render_virtual(video_id, t))
            metrics_rows.append([t, round(h, 3), round(s_, 3), round(val, 3)])
            metrics.append(FrameMetric(t, (h, s_, val)))
        size = VIRTUAL_SIZE * int(store._spec(video_id)["scale"])
        with open(metrics_dir / f"{video_id}.json", "w", encoding="utf-8", newline="\n") as handle:
            json.dump(
                {
                    "source_video_id": video_id,
                    "fps": fps,
                    "width": size,
                    "height": size,
                    "metrics": metrics_rows,
                },
                handle,
                ensure_ascii=False,
            )
            handle.write("\n")
        clips = [
            c
            for c in split_to_clips(video_id, metrics, fps, split_params, width=size, height=size)
            if c.status == "split"
        ]
        if len(clips) != segments_per_video:
            raise RuntimeError(
                f"{video_id}: expected {segments_per_video} clips, split produced {len(clips)}"
            )
        all_clips.extend(clips)

    with open(out_dir / "ocr_regions.json", "w", encoding="utf-8", newline="\n") as handle:
        json.dump(ocr_sidecar, handle, ensure_ascii=False, sort_keys=True)
        handle.write("\n")

    captions_path = out_dir / "captions.jsonl"
    with open(captions_path, "w", encoding="utf-8", newline="\n") as handle:
        for clip in sorted(all_clips, key=lambda c: c.clip_id):
            crng = random.Random(_derive_seed(seed, clip.clip_id, "caption"))
            kind = crng.random()
            if kind < 0.72:
                text = _clean_caption(crng)
                while not cc.heuristic_triage(cc.tokenize(text)).accepted:
                    text = _clean_caption(crng)
            elif kind < 0.82:
                text = _redup_caption(crng)
            elif kind < 0.91:
                text = _frame_level_caption(crng)
            else:
                text = _scene_transition_caption(crng)
            handle.write(json.dumps({"clip_id": clip.clip_id, "text": text}, ensure_ascii=False))
            handle.write("\n")

    config_path = out_dir / "config.json"
    with open(config_path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(
            {
                "data": {
                    "videos_dir": "videos",
                    "metrics_dir": "metrics",
                    "ocr_sidecar": "ocr_regions.json",
                    "captions_file": "captions.jsonl",
                    "workdir": "work",
                },
                "sample": {"target_total": sample_target, "seed": 11},
                "thresholds": {"align_min": align_min},
            },
            handle,
            ensure_ascii=False,
            indent=2,
        )
        handle.write("\n")

    return CorpusPaths(
        root=out_dir,
        videos_dir=videos_dir,
        metrics_dir=metrics_dir,
        ocr_sidecar=out_dir / "ocr_regions.json",
        captions_file=captions_path,
        config_file=config_path,
        clip_count=len(all_clips),
    )


def render_thumbnails(videos_dir: str | Path, clips: list[ClipRecord], out_dir: str | Path) -> int:
    """Render one mid-frame PNG per clip; returns the number written."""
    from PIL import Image

    store = SyntheticFrameStore(videos_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    for clip in clips:
        mid = (clip.start_frame + clip.end_frame - 1) // 2
        frame = store.get_frame(clip.source_video_id, mid)
        image = Image.fromarray(frame, mode="RGB").resize((128, 128), Image.NEAREST)
        image.save(out_dir / f"{clip.clip_id}.png")
        written += 1
    return written
