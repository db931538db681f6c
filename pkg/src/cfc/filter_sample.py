"""Threshold filtering, category-balanced sampling, and finetune selection.

Filtering rejects on any violated rule and records *all* violated rules, so
the distribution report can attribute removals per rule. Sampling allocates
per-category quotas by waterfilling (max-min fairness): every category gets
an equal share up to its available supply, remainders resolved largest-first
then by canonical label order. Selection inside a category is uniform
without replacement under a seeded generator, so re-runs are byte-identical.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .catalog import CATEGORY_LABELS, CategoryLabel, ClipRecord


@dataclass(frozen=True)
class Thresholds:
    aesthetic_min: float = 4.0
    ocr_max: float = 1.0
    tc_min: float = 0.85
    motion_min: float = 0.3
    motion_max: float = 15.0
    align_min: float = 0.2
    # Published finetune-selection cutoffs; overridable but shipped as-is.
    finetune_video_aesthetic_min: float = 5.5
    finetune_image_aesthetic_min: float = 7.0

    def __post_init__(self) -> None:
        if self.motion_min >= self.motion_max:
            raise ValueError("motion_min must be below motion_max")


@dataclass(frozen=True)
class SamplePlan:
    target_total: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.target_total <= 0:
            raise ValueError("target_total must be positive")


# Rule order is fixed; reject reasons join in this order.
_FILTER_RULES = (
    ("aesthetic_low", lambda s, t: s.s_quality < t.aesthetic_min),
    ("ocr_high", lambda s, t: s.s_ocr > t.ocr_max),
    ("tc_low", lambda s, t: s.s_tc < t.tc_min),
    ("motion_low", lambda s, t: s.s_motion < t.motion_min),
    ("motion_high", lambda s, t: s.s_motion > t.motion_max),
)


def apply_thresholds(
    records: Sequence[ClipRecord], thresholds: Thresholds
) -> tuple[list[ClipRecord], list[ClipRecord]]:
    """Partition scored records into (kept, rejected-with-reasons)."""
    kept: list[ClipRecord] = []
    rejected: list[ClipRecord] = []
    for record in records:
        if record.status != "scored" or record.scores is None:
            raise ValueError(f"record {record.clip_id} is not scored")
        reasons = [name for name, hit in _FILTER_RULES if hit(record.scores, thresholds)]
        if reasons:
            rejected.append(record.advance("filtered_out", reject_reason=",".join(reasons)))
        else:
            kept.append(record)
    return kept, rejected


def waterfill_quotas(
    available: Mapping[CategoryLabel, int], target_total: int
) -> dict[CategoryLabel, int]:
    """Max-min fair per-category quotas summing to min(target, supply).

    Iteratively raises a common water level; categories with less supply
    than the level contribute everything and saturate. The final fractional
    level resolves by largest remainder, ties in canonical label order.
    """
    if target_total <= 0:
        raise ValueError("target_total must be positive")
    quotas = {label: 0 for label in available}
    unsaturated = [label for label in CATEGORY_LABELS if available.get(label, 0) > 0]
    remaining = target_total
    while remaining > 0 and unsaturated:
        n = len(unsaturated)
        # integer comparison avoids float water levels: avail <= remaining/n
        saturated = [c for c in unsaturated if available[c] * n <= remaining]
        if saturated:
            for label in saturated:
                quotas[label] = available[label]
                remaining -= available[label]
            unsaturated = [c for c in unsaturated if c not in saturated]
            continue
        base, extras = divmod(remaining, n)
        for i, label in enumerate(unsaturated):
            quotas[label] = base + (1 if i < extras else 0)
        remaining = 0
    return quotas


def _category_rng(seed: int, label: CategoryLabel) -> random.Random:
    digest = hashlib.blake2b(f"{seed}:{label.value}".encode("utf-8"), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


def balanced_sample(records: Sequence[ClipRecord], plan: SamplePlan) -> list[ClipRecord]:
    """Category-balanced selection; a pure function of (records, plan)."""
    by_category: dict[CategoryLabel, list[ClipRecord]] = {}
    for record in records:
        if record.category is None:
            raise ValueError(f"record {record.clip_id} has no category tag")
        by_category.setdefault(record.category, []).append(record)

    quotas = waterfill_quotas(
        {label: len(group) for label, group in by_category.items()}, plan.target_total
    )
    selected: list[ClipRecord] = []
    for label in CATEGORY_LABELS:
        group = by_category.get(label)
        quota = quotas.get(label, 0)
        if not group or quota == 0:
            continue
        group = sorted(group, key=lambda r: r.clip_id)
        if quota >= len(group):
            picks = group
        else:
            picks = _category_rng(plan.seed, label).sample(group, quota)
        selected.extend(picks)
    selected.sort(key=lambda r: r.clip_id)
    return [record.advance("sampled") for record in selected]


def finetune_select(
    records: Iterable[ClipRecord],
    thresholds: Thresholds,
    approvals: Mapping[str, str] | None = None,
    *,
    review_enabled: bool = True,
) -> tuple[list[ClipRecord], list[ClipRecord]]:
    """Stage-4 high-quality selection: strict aesthetic cutoff plus human veto.

    Video records must clear `finetune_video_aesthetic_min`, image records
    (``extra["media_type"] == "image"``) the image cutoff. When review is
    enabled, a clip additionally needs an explicit ``approved`` decision;
    with review disabled the threshold alone decides.
    """
    approvals = approvals or {}
    kept: list[ClipRecord] = []
    dropped: list[ClipRecord] = []
    for record in records:
        if record.status not in ("sampled", "final"):
            raise ValueError(f"record {record.clip_id} has status {record.status!r}")
        if record.scores is None:
            raise ValueError(f"record {record.clip_id} has no scores")
        cutoff = (
            thresholds.finetune_image_aesthetic_min
            if record.extra.get("media_type") == "image"
            else thresholds.finetune_video_aesthetic_min
        )
        if not record.scores.s_quality > cutoff:
            dropped.append(record.advance("rejected", reject_reason="finetune_aesthetic"))
            continue
        if review_enabled and approvals.get(record.clip_id) != "approved":
            dropped.append(record.advance("rejected", reject_reason="review_rejected"))
            continue
        kept.append(record.advance("approved"))
    return kept, dropped
