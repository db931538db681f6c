"""Stage orchestration: split -> score -> filter -> sample -> caption-filter -> finalize.

Each stage reads only its predecessor's manifest and writes its own
atomically, closed by a terminator record. A stage whose output carries a
valid terminator is skipped on re-run; anything else (missing file, partial
file, bad count) re-executes, which is the whole resumability story: crash
anywhere, re-run, get byte-identical results.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Sequence

from . import caption_curation as cc
from .catalog import (
    CaptionRecord,
    ClipRecord,
    distribution_report,
    manifest_is_complete,
    read_manifest,
    write_manifest,
)
from .config import CurationConfig
from .errors import ConfigError, ManifestError, ProviderUnavailable
from .filter_sample import apply_thresholds, balanced_sample, finetune_select
from .providers import FrameResolver, HttpProviderClient, ReferenceProviderClient
from .scene_split import split_video_file
from .scoring import build_category_model, score_clip


@dataclass
class StageState:
    """Book-keeping for one executed (or skipped) stage."""

    stage_name: str
    input_manifest: Path | None
    output_manifest: Path
    completed: bool
    record_counts: dict[str, int]


# (stage name, input manifest name, output manifest name)
STAGES: tuple[tuple[str, str | None, str], ...] = (
    ("split", None, "split"),
    ("score", "split", "scored"),
    ("filter", "scored", "filtered"),
    ("sample", "filtered", "sampled"),
    ("caption-filter", "sampled", "captioned"),
    ("finalize", "captioned", "final"),
)
STAGE_NAMES = tuple(name for name, _, _ in STAGES)


def manifest_path(workdir: str | Path, manifest_name: str) -> Path:
    return Path(workdir) / f"manifest_{manifest_name}.jsonl"


def build_provider_client(config: CurationConfig, records: Sequence[ClipRecord]):
    """Construct the configured provider client over the given clip set."""
    resolver = FrameResolver(records)
    settings = config.providers
    if settings.backend == "reference":
        from .synthetic import SyntheticFrameStore

        store = SyntheticFrameStore(config.data.videos_dir)
        sidecar = config.data.ocr_sidecar if Path(config.data.ocr_sidecar).is_file() else None
        return ReferenceProviderClient(store, resolver, dim=settings.dim, ocr_sidecar=sidecar)
    return HttpProviderClient(settings.endpoints, resolver=resolver, dim=settings.dim)


def _count_outcomes(records: Sequence[ClipRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for record in records:
        key = record.status if record.reject_reason is None else record.reject_reason
        counts[key] = counts.get(key, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# Stage bodies (pure record transforms; orchestration handles I/O)


def stage_split(config: CurationConfig) -> list[ClipRecord]:
    metrics_dir = Path(config.data.metrics_dir)
    if not metrics_dir.is_dir():
        raise ManifestError(f"metrics directory not found: {metrics_dir}")
    records: list[ClipRecord] = []
    for metric_file in sorted(metrics_dir.glob("*.json")):
        records.extend(split_video_file(metric_file, config.split))
    records.sort(key=lambda r: r.clip_id)
    return records


def stage_score(config: CurationConfig, records: Sequence[ClipRecord]) -> list[ClipRecord]:
    todo = [r for r in records if r.status == "split"]
    if not todo:
        return []
    providers = build_provider_client(config, todo)
    # Prompt embeddings happen once up front; an unreachable backend aborts
    # the stage here rather than failing every clip individually.
    model = build_category_model(providers.embed_text)
    workers = config.workers or None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        scored = list(pool.map(lambda clip: score_clip(clip, providers, model), todo))
    if scored and all(r.status == "scoring_failed" for r in scored):
        raise ProviderUnavailable(
            "every clip failed to score; treating as provider outage", kind="score"
        )
    scored.sort(key=lambda r: r.clip_id)
    return scored


def stage_filter(config: CurationConfig, records: Sequence[ClipRecord]) -> list[ClipRecord]:
    scored = [r for r in records if r.status == "scored"]
    kept, rejected = apply_thresholds(scored, config.thresholds)
    out = kept + rejected
    out.sort(key=lambda r: r.clip_id)
    return out


def stage_sample(config: CurationConfig, records: Sequence[ClipRecord]) -> list[ClipRecord]:
    kept = [r for r in records if r.status == "scored"]
    return balanced_sample(kept, config.sample)


def _load_caption_sidecar(path: str | Path) -> dict[str, str]:
    captions: dict[str, str] = {}
    path = Path(path)
    if not path.is_file():
        return captions
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}: malformed line {lineno}: {exc.msg}") from exc
            captions[entry["clip_id"]] = entry["text"]
    return captions


def stage_caption_filter(
    config: CurationConfig,
    records: Sequence[ClipRecord],
    llm: Any | None = None,
) -> list[ClipRecord]:
    """Alignment gating plus three-question triage over sampled clips.

    `llm=None` builds the configured backend; pass ``llm="off"`` to force
    pure heuristic triage.
    """
    todo = [r for r in records if r.status == "sampled"]
    captions = _load_caption_sidecar(config.data.captions_file)
    providers = build_provider_client(config, todo) if todo else None
    if llm is None and providers is not None:
        llm = providers

    from .scoring import mean_video_embedding, sample_triplet

    out: list[ClipRecord] = []
    for record in todo:
        text = captions.get(record.clip_id)
        if not text:
            out.append(record.advance("caption_rejected", reject_reason="missing_caption"))
            continue
        triplet = sample_triplet(record)
        embeddings = providers.embed_images([triplet.start, triplet.mid, triplet.end])
        video_embedding = mean_video_embedding(*embeddings)
        caption_embedding = providers.embed_text(text)
        s_align = cc.alignment_score(caption_embedding, video_embedding)
        scores = replace(record.scores, s_align=s_align)
        if s_align < config.thresholds.align_min:
            out.append(
                record.advance(
                    "caption_rejected",
                    reject_reason="low_alignment",
                    scores=scores,
                    caption=CaptionRecord(text=text, word_count=cc.word_count(text)),
                )
            )
            continue
        if llm == "off":
            triage = cc.heuristic_triage(cc.tokenize(text))
            source = "heuristic"
        else:
            triage, source = cc.llm_triage(text, llm)
        caption = CaptionRecord(
            text=text,
            word_count=cc.word_count(text),
            decision_source=source,
            triage=triage,
        )
        reason = cc.triage_reject_reason(triage)
        if reason is not None:
            out.append(
                record.advance(
                    "caption_rejected", reject_reason=reason, scores=scores, caption=caption
                )
            )
        else:
            out.append(replace(record, scores=scores, caption=caption))
    out.sort(key=lambda r: r.clip_id)
    return out


def stage_finalize(config: CurationConfig, records: Sequence[ClipRecord]) -> list[ClipRecord]:
    final = [r.advance("final") for r in records if r.status == "sampled"]
    final.sort(key=lambda r: r.clip_id)
    return final


_STAGE_BODIES: dict[str, Callable[..., list[ClipRecord]]] = {
    "split": stage_split,
    "score": stage_score,
    "filter": stage_filter,
    "sample": stage_sample,
    "caption-filter": stage_caption_filter,
    "finalize": stage_finalize,
}


# ---------------------------------------------------------------------------
# Orchestration


def _clean_stale_temps(workdir: Path, manifest_name: str) -> None:
    for stale in workdir.glob(f"manifest_{manifest_name}.jsonl.*.tmp"):
        try:
            stale.unlink()
        except OSError:
            pass


def run_pipeline(
    config: CurationConfig,
    stages: Sequence[str] | None = None,
    *,
    emit_report: bool = True,
) -> list[StageState]:
    """Execute the requested (contiguous) stage range, skipping completed ones."""
    requested = list(stages) if stages else list(STAGE_NAMES)
    for name in requested:
        if name not in STAGE_NAMES:
            raise ConfigError(f"unknown stage {name!r}; expected one of {', '.join(STAGE_NAMES)}")
    indexes = sorted(STAGE_NAMES.index(name) for name in requested)
    if indexes != list(range(indexes[0], indexes[-1] + 1)):
        raise ConfigError("requested stages must be contiguous in pipeline order")

    workdir = Path(config.data.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    states: list[StageState] = []

    for index in indexes:
        stage_name, input_name, output_name = STAGES[index]
        output_path = manifest_path(workdir, output_name)
        input_path = manifest_path(workdir, input_name) if input_name else None
        if manifest_is_complete(output_path):
            states.append(
                StageState(
                    stage_name=stage_name,
                    input_manifest=input_path,
                    output_manifest=output_path,
                    completed=True,
                    record_counts=_count_outcomes(read_manifest(output_path)),
                )
            )
            continue
        _clean_stale_temps(workdir, output_name)
        if input_name is None:
            records = _STAGE_BODIES[stage_name](config)
        else:
            if not manifest_is_complete(input_path):
                raise ManifestError(f"missing input manifest: {input_name}")
            records = _STAGE_BODIES[stage_name](config, read_manifest(input_path))
        write_manifest(records, output_name, output_path, complete=True)
        states.append(
            StageState(
                stage_name=stage_name,
                input_manifest=input_path,
                output_manifest=output_path,
                completed=True,
                record_counts=_count_outcomes(records),
            )
        )

    if emit_report and indexes[-1] == len(STAGES) - 1:
        scored = manifest_path(workdir, "scored")
        final = manifest_path(workdir, "final")
        if scored.is_file() and final.is_file():
            distribution_report(scored, final, config.report_bins.as_dict(), workdir)
    return states


def run_finetune(
    config: CurationConfig,
    manifest: str | Path,
    decisions_path: str | Path,
    out_path: str | Path,
) -> tuple[list[ClipRecord], list[ClipRecord]]:
    """Apply the stage-4 selection to a final/sampled manifest and write it."""
    records = read_manifest(manifest)
    eligible = [r for r in records if r.status in ("sampled", "final")]
    approvals = load_decisions(decisions_path)
    kept, dropped = finetune_select(
        eligible, config.thresholds, approvals, review_enabled=config.review_enabled
    )
    out = sorted(kept + dropped, key=lambda r: r.clip_id)
    write_manifest(out, "finetune", out_path, complete=True)
    return kept, dropped


def load_decisions(path: str | Path) -> dict[str, str]:
    """Replay an append-only decision log; later lines win."""
    decisions: dict[str, str] = {}
    path = Path(path)
    if not path.is_file():
        return decisions
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            decisions[entry["clip_id"]] = entry["decision"]
    return decisions
