"""Per-clip coarse-curation scores.

Three frames represent a clip: start, middle, end. Aesthetic and OCR scores
average over all three, temporal consistency is the cosine similarity of the
start/end embeddings, motion averages the two flow transitions, and the
category comes from an argmax over cosine similarities between the mean
frame embedding and the 14 category-prompt embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import CATEGORY_LABELS, CategoryLabel, ClipRecord, ScoreSet
from .errors import DegenerateEmbedding, ProviderError
from .providers import EmbeddingVector, FrameRef


@dataclass(frozen=True)
class FrameTriplet:
    start: FrameRef
    mid: FrameRef
    end: FrameRef


@dataclass(frozen=True)
class CategoryModel:
    """The 14 labels, their prompts, and the prompt embeddings, index-aligned."""

    labels: tuple[CategoryLabel, ...]
    prompts: tuple[str, ...]
    prompt_embeddings: tuple[EmbeddingVector, ...]

    def __post_init__(self) -> None:
        if not len(self.labels) == len(self.prompts) == len(self.prompt_embeddings):
            raise ValueError("category model arrays must be index-aligned")


def category_prompt(label: CategoryLabel) -> str:
    # Verbatim prompt template, article included as-is.
    return f"a photo of a {label.value.lower()}"


def build_category_model(embed_text) -> CategoryModel:
    """Embed the 14 category prompts with the given text-embedding call."""
    prompts = tuple(category_prompt(label) for label in CATEGORY_LABELS)
    embeddings = tuple(embed_text(p) for p in prompts)
    return CategoryModel(labels=CATEGORY_LABELS, prompts=prompts, prompt_embeddings=embeddings)


def sample_triplet(clip: ClipRecord) -> FrameTriplet:
    """Start, floor-midpoint, and last frame of the clip (end is exclusive)."""
    start = clip.start_frame
    end = clip.end_frame - 1
    mid = (start + end) // 2
    return FrameTriplet(
        start=FrameRef(clip.clip_id, start),
        mid=FrameRef(clip.clip_id, mid),
        end=FrameRef(clip.clip_id, end),
    )


def quality_score(a_start: float, a_mid: float, a_end: float) -> float:
    """Mean of the three per-frame aesthetic scores."""
    return (a_start + a_mid + a_end) / 3.0


def ocr_score(c_start: int, c_mid: int, c_end: int) -> float:
    """Mean of the three per-frame text-region counts."""
    if min(c_start, c_mid, c_end) < 0:
        raise ValueError("OCR counts must be non-negative")
    return (c_start + c_mid + c_end) / 3.0


def motion_score(m1: float, m2: float) -> float:
    """Mean of the two flow magnitudes (start->mid, mid->end)."""
    if m1 < 0 or m2 < 0:
        raise ValueError("flow magnitudes must be non-negative")
    return (m1 + m2) / 2.0


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise DegenerateEmbedding("cosine similarity undefined for zero-norm vector")
    value = float(np.dot(a, b) / (na * nb))
    # clamp rounding spill
    return max(-1.0, min(1.0, value))


def temporal_consistency(e_start: EmbeddingVector, e_end: EmbeddingVector) -> float:
    """Cosine similarity between start- and end-frame embeddings."""
    if e_start.dim != e_end.dim:
        raise ValueError("embeddings must share dimension")
    return cosine_similarity(e_start.values, e_end.values)


def mean_video_embedding(
    e_start: EmbeddingVector, e_mid: EmbeddingVector, e_end: EmbeddingVector
) -> EmbeddingVector:
    """Component-wise mean of the three frame embeddings.

    Deliberately not re-normalized: the similarity formula divides by the
    mean vector's own norm.
    """
    if not e_start.dim == e_mid.dim == e_end.dim:
        raise ValueError("embeddings must share dimension")
    mean = (e_start.values + e_mid.values + e_end.values) / 3.0
    return EmbeddingVector(mean, normalized=False)


def classify_category(
    video_embedding: EmbeddingVector, model: CategoryModel
) -> tuple[CategoryLabel, float]:
    """Most similar category prompt; exact ties go to the lowest index."""
    sims = [cosine_similarity(video_embedding.values, e.values) for e in model.prompt_embeddings]
    best = int(np.argmax(sims))
    return model.labels[best], sims[best]


def score_clip(clip: ClipRecord, providers, model: CategoryModel) -> ClipRecord:
    """Compute the full ScoreSet for one clip via the given provider client.

    Any provider failure marks the clip ``scoring_failed`` with the failing
    backend named in the reason; scores are never silently defaulted.
    """
    triplet = sample_triplet(clip)
    frames = [triplet.start, triplet.mid, triplet.end]
    try:
        aesthetics = providers.aesthetic_scores(frames)
    except ProviderError:
        return clip.advance("scoring_failed", reject_reason="aesthetic_provider")
    try:
        counts = providers.ocr_region_counts(frames)
    except ProviderError:
        return clip.advance("scoring_failed", reject_reason="ocr_provider")
    try:
        embeddings = providers.embed_images(frames)
    except ProviderError:
        return clip.advance("scoring_failed", reject_reason="embed_provider")
    try:
        flows = providers.flow_magnitudes(
            [(triplet.start, triplet.mid), (triplet.mid, triplet.end)]
        )
    except ProviderError:
        return clip.advance("scoring_failed", reject_reason="flow_provider")

    e_start, e_mid, e_end = embeddings
    phi = mean_video_embedding(e_start, e_mid, e_end)
    try:
        s_tc = temporal_consistency(e_start, e_end)
        label, similarity = classify_category(phi, model)
    except DegenerateEmbedding:
        return clip.advance("scoring_failed", reject_reason="embed_provider")

    scores = ScoreSet(
        s_quality=quality_score(*aesthetics),
        s_ocr=ocr_score(*counts),
        s_tc=s_tc,
        s_motion=motion_score(*flows),
        category_similarity=similarity,
    )
    return clip.advance("scored", scores=scores, category=label)
