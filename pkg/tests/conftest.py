from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from cfc.catalog import (
    CATEGORY_LABELS,
    CaptionRecord,
    ClipRecord,
    ScoreSet,
    TriageResult,
    make_clip_id,
)


def random_score_set(rng: random.Random, with_align: bool = True) -> ScoreSet:
    return ScoreSet(
        s_quality=round(rng.uniform(0, 10), 6),
        s_ocr=round(rng.uniform(0, 6), 6),
        s_tc=round(rng.uniform(-1, 1), 6),
        s_motion=round(rng.uniform(0, 20), 6),
        category_similarity=round(rng.uniform(-1, 1), 6),
        s_align=round(rng.uniform(-1, 1), 6) if with_align and rng.random() < 0.7 else None,
        extra={"s_custom": round(rng.random(), 6)} if rng.random() < 0.3 else {},
    )


def random_record(rng: random.Random, status: str = "scored") -> ClipRecord:
    source = f"video_{rng.randrange(1000):03d}"
    start = rng.randrange(0, 5000)
    end = start + rng.randrange(15, 600)
    rejecting = status in ("scoring_failed", "filtered_out", "caption_rejected", "rejected")
    caption = None
    if rng.random() < 0.5:
        text = " ".join(rng.choice(["a", "dog", "runs", "chef", "plates", "the", "dish"]) for _ in range(8))
        caption = CaptionRecord(
            text=text,
            word_count=len(text.split()),
            decision_source=rng.choice(["heuristic", "llm", "human"]),
            triage=TriageResult("no", "no", "no") if rng.random() < 0.5 else None,
        )
    return ClipRecord(
        clip_id=make_clip_id(source, start, end),
        source_video_id=source,
        start_frame=start,
        end_frame=end,
        fps=rng.choice([10.0, 24.0, 30.0]),
        width=rng.choice([320, 640]),
        height=rng.choice([240, 360]),
        status=status,
        reject_reason="synthetic_reason" if rejecting else None,
        scores=random_score_set(rng) if status != "split" else None,
        category=rng.choice(CATEGORY_LABELS) if status != "split" else None,
        caption=caption,
        extra={"origin": "unit-test"} if rng.random() < 0.4 else {},
    )


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    """The bundled 200-clip synthetic corpus, generated once per session."""
    from cfc.synthetic import generate_corpus

    root = tmp_path_factory.mktemp("corpus")
    generate_corpus(root, seed=7)
    return root


@pytest.fixture(scope="session")
def small_corpus_dir(tmp_path_factory) -> Path:
    """A 20-clip corpus for fast pipeline-structure tests."""
    from cfc.synthetic import generate_corpus

    root = tmp_path_factory.mktemp("small_corpus")
    generate_corpus(root, seed=13, n_videos=4, segments_per_video=5, sample_target=12)
    return root


@pytest.fixture(scope="session")
def triage_corpus() -> dict:
    from importlib import resources

    return json.loads(resources.files("cfc.data").joinpath("triage_corpus.json").read_text())
