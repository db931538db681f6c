"""Uniform access to model backends: embeddings, aesthetic, OCR, flow, chat.

Two interchangeable client families implement the same call surface:

* :class:`HttpProviderClient` speaks the JSON wire protocol (``POST
  /v1/embed_image`` and friends) with batching, retries, and a bounded
  in-flight request count.
* :class:`ReferenceProviderClient` is a deterministic, in-process backend
  that makes the whole pipeline runnable and testable offline: color
  histograms for image embeddings, character-trigram hashes for text,
  histogram entropy for aesthetics, a sidecar annotation file for OCR,
  exhaustive block matching for optical flow, and the caption heuristics
  for chat.

Every call is pure with respect to (backend identity, input).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Protocol, Sequence

import numpy as np

from .catalog import ClipRecord, UNDETERMINED, YES, NO
from .errors import (
    EmptyInput,
    ProtocolViolation,
    ProviderError,
    ProviderUnavailable,
)

DEFAULT_DIM = 512
MAX_BATCH = 64

#: provider kinds, also the suffixes of the CFC_PROVIDER_URL_<KIND> env overrides
PROVIDER_KINDS = ("embed_image", "embed_text", "aesthetic", "ocr_count", "flow", "chat")


@dataclass(frozen=True)
class FrameRef:
    """A frame referenced by clip identity; pixels are never inlined."""

    clip_id: str
    frame_index: int


@dataclass(frozen=True)
class ProviderEndpoint:
    """Connection settings for one backend kind."""

    base_url: str = ""
    timeout_ms: int = 10_000
    max_in_flight: int = 8
    retry_budget: int = 2

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.retry_budget < 0:
            raise ValueError("retry_budget must be >= 0")


class EmbeddingVector:
    """Fixed-dimension real vector; when `normalized`, the L2 norm is 1."""

    __slots__ = ("values", "normalized")

    def __init__(self, values: Sequence[float] | np.ndarray, normalized: bool = False):
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("embedding must be one-dimensional")
        self.normalized = normalized

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return self.normalized == other.normalized and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"EmbeddingVector(dim={self.dim}, normalized={self.normalized})"


class FrameStore(Protocol):
    """Source of raw RGB planes, keyed by (source video, absolute frame)."""

    def get_frame(self, source_video_id: str, frame_index: int) -> np.ndarray:
        """Return a (H, W, 3) uint8 array."""
        ...


class ArrayFrameStore:
    """In-memory frame store: source_video_id -> (T, H, W, 3) uint8 array."""

    def __init__(self, videos: dict[str, np.ndarray]):
        self._videos = videos

    def get_frame(self, source_video_id: str, frame_index: int) -> np.ndarray:
        video = self._videos.get(source_video_id)
        if video is None:
            raise KeyError(f"unknown source video {source_video_id!r}")
        return video[frame_index]


class FrameResolver:
    """Maps FrameRefs back to (source_video_id, frame_index), checking bounds."""

    def __init__(self, records: Iterable[ClipRecord]):
        self._clips = {r.clip_id: r for r in records}

    def resolve(self, ref: FrameRef) -> tuple[str, int]:
        clip = self._clips.get(ref.clip_id)
        if clip is None:
            raise KeyError(f"unknown clip {ref.clip_id!r}")
        if not clip.start_frame <= ref.frame_index < clip.end_frame:
            raise ValueError(
                f"frame {ref.frame_index} outside clip span "
                f"[{clip.start_frame}, {clip.end_frame}) of {ref.clip_id}"
            )
        return clip.source_video_id, ref.frame_index

    def clip(self, clip_id: str) -> ClipRecord:
        return self._clips[clip_id]

    def same_clip(self, a: FrameRef, b: FrameRef) -> bool:
        return a.clip_id == b.clip_id


# ---------------------------------------------------------------------------
# Reference backend primitives


def color_histogram_embedding(frame: np.ndarray, dim: int = DEFAULT_DIM) -> EmbeddingVector:
    """8x8x8 joint RGB histogram, L2-normalized, padded/truncated to `dim`."""
    pixels = frame.reshape(-1, 3).astype(np.uint16)
    bins = (pixels[:, 0] // 32) * 64 + (pixels[:, 1] // 32) * 8 + (pixels[:, 2] // 32)
    hist = np.bincount(bins, minlength=512).astype(np.float64)
    if dim <= 512:
        hist = hist[:dim]
    else:
        hist = np.concatenate([hist, np.zeros(dim - 512)])
    norm = np.linalg.norm(hist)
    if norm == 0.0:
        raise ProtocolViolation("histogram embedding collapsed to zero", kind="embed")
    return EmbeddingVector(hist / norm, normalized=True)


def _stable_bucket(token: str, dim: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dim


def trigram_embedding(text: str, dim: int = DEFAULT_DIM) -> EmbeddingVector:
    """Character-trigram hash histogram, L2-normalized."""
    if not text:
        raise EmptyInput("cannot embed empty text", kind="embed")
    grams = [text[i : i + 3] for i in range(len(text) - 2)] or [text]
    hist = np.zeros(dim, dtype=np.float64)
    for gram in grams:
        hist[_stable_bucket(gram, dim)] += 1.0
    return EmbeddingVector(hist / np.linalg.norm(hist), normalized=True)


def histogram_entropy_score(frame: np.ndarray) -> float:
    """Deterministic stand-in aesthetic score in [0, 10].

    Entropy of the 512-bin color histogram, scaled so a uniform histogram
    maps to 10 and a single-color frame to 0.
    """
    pixels = frame.reshape(-1, 3).astype(np.uint16)
    bins = (pixels[:, 0] // 32) * 64 + (pixels[:, 1] // 32) * 8 + (pixels[:, 2] // 32)
    hist = np.bincount(bins, minlength=512).astype(np.float64)
    p = hist / hist.sum()
    nonzero = p[p > 0]
    entropy = float(-(nonzero * np.log(nonzero)).sum())
    return 10.0 * entropy / math.log(512.0)


_FLOW_GRID = 32
_FLOW_BLOCK = 4
_FLOW_RADIUS = 4


def _to_flow_gray(frame: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Grayscale the frame and sample it down to the 32x32 matching grid."""
    gray = (
        0.299 * frame[:, :, 0].astype(np.float64)
        + 0.587 * frame[:, :, 1].astype(np.float64)
        + 0.114 * frame[:, :, 2].astype(np.float64)
    )
    h, w = gray.shape
    gh, gw = min(_FLOW_GRID, h), min(_FLOW_GRID, w)
    rows = (np.arange(gh) * h) // gh
    cols = (np.arange(gw) * w) // gw
    return gray[np.ix_(rows, cols)], h / gh, w / gw


def block_matching_flow(frame_a: np.ndarray, frame_b: np.ndarray) -> float:
    """Mean per-pixel displacement magnitude via exhaustive block matching.

    4x4 blocks on a 32x32 grayscale downscale, search radius 4; displacement
    is rescaled back to source-pixel units. Ties in SAD resolve toward the
    smaller displacement, so identical frames score exactly 0.
    """
    if frame_a.shape != frame_b.shape:
        raise ValueError("flow frames must share dimensions")
    a, sy, sx = _to_flow_gray(frame_a)
    b, _, _ = _to_flow_gray(frame_b)
    gh, gw = a.shape
    nby, nbx = gh // _FLOW_BLOCK, gw // _FLOW_BLOCK
    if nby == 0 or nbx == 0:
        return 0.0
    a = a[: nby * _FLOW_BLOCK, : nbx * _FLOW_BLOCK]

    best_sad = np.full((nby, nbx), np.inf)
    best_dy = np.zeros((nby, nbx), dtype=np.int64)
    best_dx = np.zeros((nby, nbx), dtype=np.int64)

    offsets = sorted(
        (
            (dy, dx)
            for dy in range(-_FLOW_RADIUS, _FLOW_RADIUS + 1)
            for dx in range(-_FLOW_RADIUS, _FLOW_RADIUS + 1)
        ),
        key=lambda o: (o[0] * o[0] + o[1] * o[1], o[0], o[1]),
    )
    for dy, dx in offsets:
        # valid source rows/cols such that the shifted block stays inside b
        y0 = max(0, -dy)
        y1 = min(nby * _FLOW_BLOCK, gh - dy)
        x0 = max(0, -dx)
        x1 = min(nbx * _FLOW_BLOCK, gw - dx)
        # clamp to whole blocks
        by0 = (y0 + _FLOW_BLOCK - 1) // _FLOW_BLOCK
        by1 = y1 // _FLOW_BLOCK
        bx0 = (x0 + _FLOW_BLOCK - 1) // _FLOW_BLOCK
        bx1 = x1 // _FLOW_BLOCK
        if by0 >= by1 or bx0 >= bx1:
            continue
        ry0, ry1 = by0 * _FLOW_BLOCK, by1 * _FLOW_BLOCK
        rx0, rx1 = bx0 * _FLOW_BLOCK, bx1 * _FLOW_BLOCK
        diff = np.abs(a[ry0:ry1, rx0:rx1] - b[ry0 + dy : ry1 + dy, rx0 + dx : rx1 + dx])
        sums = diff.reshape(by1 - by0, _FLOW_BLOCK, bx1 - bx0, _FLOW_BLOCK).sum(axis=(1, 3))
        region = (slice(by0, by1), slice(bx0, bx1))
        improved = sums < best_sad[region]
        best_sad[region] = np.where(improved, sums, best_sad[region])
        best_dy[region] = np.where(improved, dy, best_dy[region])
        best_dx[region] = np.where(improved, dx, best_dx[region])

    magnitudes = np.hypot(best_dy * sy, best_dx * sx)
    return float(magnitudes.mean())


_YES_TOKENS = {"yes", "y", "true"}
_NO_TOKENS = {"no", "n", "false"}


def parse_yes_no(text: str, n_questions: int) -> list[str]:
    """Turn a free-form chat reply into one ternary answer per question.

    Anything that is not an unambiguous yes/no becomes ``undetermined``;
    the parser never guesses.
    """
    parts = [line.strip() for line in text.splitlines() if line.strip()]
    if len(parts) < n_questions and len(parts) == 1 and ("," in parts[0] or ";" in parts[0]):
        parts = [p.strip() for p in parts[0].replace(";", ",").split(",") if p.strip()]
    answers: list[str] = []
    for i in range(n_questions):
        if i >= len(parts):
            answers.append(UNDETERMINED)
            continue
        token = parts[i].split()[0].strip(".,:;!?'\"`").lower() if parts[i].split() else ""
        if token in _YES_TOKENS:
            answers.append(YES)
        elif token in _NO_TOKENS:
            answers.append(NO)
        else:
            answers.append(UNDETERMINED)
    return answers


class _InFlightGauge:
    """Semaphore-bounded counter with a high-water mark for tests."""

    def __init__(self, limit: int):
        self._sem = threading.BoundedSemaphore(limit)
        self._lock = threading.Lock()
        self._current = 0
        self.max_observed = 0

    def __enter__(self) -> "_InFlightGauge":
        self._sem.acquire()
        with self._lock:
            self._current += 1
            self.max_observed = max(self.max_observed, self._current)
        return self

    def __exit__(self, *exc_info: Any) -> None:
        with self._lock:
            self._current -= 1
        self._sem.release()


# ---------------------------------------------------------------------------
# Clients


def _check_vector(values: Sequence[float], dim: int, kind: str) -> EmbeddingVector:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (dim,):
        raise ProtocolViolation(
            f"expected embedding of dimension {dim}, got shape {arr.shape}", kind=kind
        )
    if not np.all(np.isfinite(arr)):
        raise ProtocolViolation("non-finite embedding component", kind=kind)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ProtocolViolation("zero-norm embedding", kind=kind)
    # backends may return raw features; the embedding contract is unit norm
    if abs(norm - 1.0) > 1e-6:
        arr = arr / norm
    return EmbeddingVector(arr, normalized=True)


def _check_finite(value: float, kind: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ProtocolViolation(f"non-finite {kind} value", kind=kind)
    return value


class ReferenceProviderClient:
    """Deterministic offline backend; the documented oracle for every call."""

    def __init__(
        self,
        store: FrameStore,
        resolver: FrameResolver,
        dim: int = DEFAULT_DIM,
        ocr_sidecar: dict[str, dict[str, int]] | str | Path | None = None,
    ):
        self._store = store
        self._resolver = resolver
        self._dim = dim
        if isinstance(ocr_sidecar, (str, Path)):
            with open(ocr_sidecar, "r", encoding="utf-8") as handle:
                ocr_sidecar = json.load(handle)
        self._ocr: dict[str, dict[str, int]] = ocr_sidecar or {}

    @property
    def dim(self) -> int:
        return self._dim

    def _frame(self, ref: FrameRef) -> np.ndarray:
        source, index = self._resolver.resolve(ref)
        return self._store.get_frame(source, index)

    def embed_image(self, frame: FrameRef) -> EmbeddingVector:
        return color_histogram_embedding(self._frame(frame), self._dim)

    def embed_images(self, frames: Sequence[FrameRef]) -> list[EmbeddingVector]:
        return [self.embed_image(f) for f in frames]

    def embed_text(self, text: str) -> EmbeddingVector:
        return trigram_embedding(text, self._dim)

    def embed_texts(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        return [self.embed_text(t) for t in texts]

    def aesthetic_score(self, frame: FrameRef) -> float:
        return histogram_entropy_score(self._frame(frame))

    def aesthetic_scores(self, frames: Sequence[FrameRef]) -> list[float]:
        return [self.aesthetic_score(f) for f in frames]

    def ocr_region_count(self, frame: FrameRef) -> int:
        source, index = self._resolver.resolve(frame)
        count = int(self._ocr.get(source, {}).get(str(index), 0))
        if count < 0:
            raise ProtocolViolation(f"negative OCR count for {source}@{index}", kind="ocr")
        return count

    def ocr_region_counts(self, frames: Sequence[FrameRef]) -> list[int]:
        return [self.ocr_region_count(f) for f in frames]

    def flow_magnitude(self, frame_a: FrameRef, frame_b: FrameRef) -> float:
        if not self._resolver.same_clip(frame_a, frame_b):
            raise ValueError("flow frames must come from the same clip")
        if frame_a.frame_index > frame_b.frame_index:
            raise ValueError("frame_a must not come after frame_b")
        return block_matching_flow(self._frame(frame_a), self._frame(frame_b))

    def flow_magnitudes(self, pairs: Sequence[tuple[FrameRef, FrameRef]]) -> list[float]:
        return [self.flow_magnitude(a, b) for a, b in pairs]

    def llm_yes_no(self, questions: Sequence[str], context: str) -> list[str]:
        """Answer the triage questions by running the caption heuristics."""
        if not 1 <= len(questions) <= 8:
            raise ValueError("expected between 1 and 8 questions")
        # Imported here: caption_curation is a consumer of this module's chat
        # surface, so the dependency must stay one-directional at import time.
        from . import caption_curation as cc

        tokenized = cc.tokenize(context)
        answers = []
        for question in questions:
            q = question.lower()
            if "scene transition" in q:
                answers.append(YES if cc.detect_scene_transition(tokenized) else NO)
            elif "image caption" in q:
                answers.append(YES if cc.detect_frame_level(tokenized) else NO)
            elif "repetitive" in q:
                answers.append(YES if cc.detect_reduplication(tokenized) else NO)
            else:
                answers.append(UNDETERMINED)
        return answers


class HttpProviderClient:
    """JSON-over-HTTP client with retries, batching, and bounded concurrency.

    One endpoint per provider kind; ``CFC_PROVIDER_URL_<KIND>`` environment
    variables override the configured base URLs. Requests are retried on
    connection errors, timeouts, and 5xx responses until the retry budget is
    spent, then surface as :class:`ProviderUnavailable`. Malformed payloads
    (wrong dimension, non-finite numbers, negative counts) surface as
    :class:`ProtocolViolation` without retry.
    """

    _PATHS = {
        "embed_image": "/v1/embed_image",
        "embed_text": "/v1/embed_text",
        "aesthetic": "/v1/aesthetic",
        "ocr_count": "/v1/ocr_count",
        "flow": "/v1/flow",
        "chat": "/v1/chat",
    }

    def __init__(
        self,
        endpoints: dict[str, ProviderEndpoint],
        resolver: FrameResolver | None = None,
        dim: int = DEFAULT_DIM,
        env: dict[str, str] | None = None,
    ):
        env = dict(os.environ if env is None else env)
        self._endpoints: dict[str, ProviderEndpoint] = {}
        for kind in PROVIDER_KINDS:
            endpoint = endpoints.get(kind, ProviderEndpoint())
            override = env.get(f"CFC_PROVIDER_URL_{kind.upper()}")
            if override:
                endpoint = ProviderEndpoint(
                    base_url=override,
                    timeout_ms=endpoint.timeout_ms,
                    max_in_flight=endpoint.max_in_flight,
                    retry_budget=endpoint.retry_budget,
                )
            self._endpoints[kind] = endpoint
        self._resolver = resolver
        self._dim = dim
        self._gauges = {
            kind: _InFlightGauge(ep.max_in_flight) for kind, ep in self._endpoints.items()
        }
        import requests

        self._session = requests.Session()

    @property
    def dim(self) -> int:
        return self._dim

    def gauge(self, kind: str) -> _InFlightGauge:
        """Test hook: the in-flight counter for one endpoint kind."""
        return self._gauges[kind]

    def _frame_payload(self, ref: FrameRef) -> dict[str, Any]:
        payload: dict[str, Any] = {"clip_id": ref.clip_id, "frame_index": ref.frame_index}
        if self._resolver is not None:
            source, index = self._resolver.resolve(ref)
            payload["source_uri"] = source
            payload["frame_index"] = index
        return payload

    def _post(self, kind: str, body: dict[str, Any]) -> dict[str, Any]:
        import requests

        endpoint = self._endpoints[kind]
        if not endpoint.base_url:
            raise ProviderUnavailable(f"no endpoint configured for {kind!r}", kind=kind)
        url = endpoint.base_url.rstrip("/") + self._PATHS[kind]
        last_error: Exception | None = None
        for _ in range(endpoint.retry_budget + 1):
            try:
                with self._gauges[kind]:
                    response = self._session.post(
                        url, json=body, timeout=endpoint.timeout_ms / 1000.0
                    )
            except (requests.Timeout, requests.ConnectionError) as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = ProviderError(f"{kind}: server error {response.status_code}", kind=kind)
                continue
            if response.status_code >= 400:
                raise ProtocolViolation(
                    f"{kind}: backend rejected request ({response.status_code})", kind=kind
                )
            try:
                payload = response.json()
            except ValueError as exc:
                raise ProtocolViolation(f"{kind}: non-JSON response", kind=kind) from exc
            if not isinstance(payload, dict):
                raise ProtocolViolation(f"{kind}: response must be an object", kind=kind)
            return payload
        raise ProviderUnavailable(
            f"{kind}: unreachable after {endpoint.retry_budget + 1} attempts: {last_error}",
            kind=kind,
        )

    @staticmethod
    def _chunks(items: Sequence[Any]) -> Iterable[Sequence[Any]]:
        for i in range(0, len(items), MAX_BATCH):
            yield items[i : i + MAX_BATCH]

    def embed_images(self, frames: Sequence[FrameRef]) -> list[EmbeddingVector]:
        out: list[EmbeddingVector] = []
        for chunk in self._chunks(frames):
            body = {"frames": [self._frame_payload(f) for f in chunk]}
            payload = self._post("embed_image", body)
            vectors = payload.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(chunk):
                raise ProtocolViolation("embed_image: vector count mismatch", kind="embed")
            out.extend(_check_vector(v, self._dim, "embed") for v in vectors)
        return out

    def embed_image(self, frame: FrameRef) -> EmbeddingVector:
        return self.embed_images([frame])[0]

    def embed_texts(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        for text in texts:
            if not text:
                raise EmptyInput("cannot embed empty text", kind="embed")
        out: list[EmbeddingVector] = []
        for chunk in self._chunks(texts):
            payload = self._post("embed_text", {"texts": list(chunk)})
            vectors = payload.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(chunk):
                raise ProtocolViolation("embed_text: vector count mismatch", kind="embed")
            out.extend(_check_vector(v, self._dim, "embed") for v in vectors)
        return out

    def embed_text(self, text: str) -> EmbeddingVector:
        return self.embed_texts([text])[0]

    def aesthetic_scores(self, frames: Sequence[FrameRef]) -> list[float]:
        out: list[float] = []
        for chunk in self._chunks(frames):
            body = {"frames": [self._frame_payload(f) for f in chunk]}
            payload = self._post("aesthetic", body)
            scores = payload.get("scores")
            if not isinstance(scores, list) or len(scores) != len(chunk):
                raise ProtocolViolation("aesthetic: score count mismatch", kind="aesthetic")
            out.extend(_check_finite(s, "aesthetic") for s in scores)
        return out

    def aesthetic_score(self, frame: FrameRef) -> float:
        return self.aesthetic_scores([frame])[0]

    def ocr_region_counts(self, frames: Sequence[FrameRef]) -> list[int]:
        out: list[int] = []
        for chunk in self._chunks(frames):
            body = {"frames": [self._frame_payload(f) for f in chunk]}
            payload = self._post("ocr_count", body)
            counts = payload.get("counts")
            if not isinstance(counts, list) or len(counts) != len(chunk):
                raise ProtocolViolation("ocr_count: count mismatch", kind="ocr")
            for count in counts:
                count = int(_check_finite(count, "ocr"))
                if count < 0:
                    raise ProtocolViolation("ocr_count: negative region count", kind="ocr")
                out.append(count)
        return out

    def ocr_region_count(self, frame: FrameRef) -> int:
        return self.ocr_region_counts([frame])[0]

    def flow_magnitudes(self, pairs: Sequence[tuple[FrameRef, FrameRef]]) -> list[float]:
        for a, b in pairs:
            if a.clip_id != b.clip_id:
                raise ValueError("flow frames must come from the same clip")
            if a.frame_index > b.frame_index:
                raise ValueError("frame_a must not come after frame_b")
        out: list[float] = []
        for chunk in self._chunks(pairs):
            body = {
                "pairs": [
                    {"a": self._frame_payload(a), "b": self._frame_payload(b)} for a, b in chunk
                ]
            }
            payload = self._post("flow", body)
            magnitudes = payload.get("magnitudes")
            if not isinstance(magnitudes, list) or len(magnitudes) != len(chunk):
                raise ProtocolViolation("flow: magnitude count mismatch", kind="flow")
            for magnitude in magnitudes:
                magnitude = _check_finite(magnitude, "flow")
                if magnitude < 0:
                    raise ProtocolViolation("flow: negative magnitude", kind="flow")
                out.append(magnitude)
        return out

    def flow_magnitude(self, frame_a: FrameRef, frame_b: FrameRef) -> float:
        return self.flow_magnitudes([(frame_a, frame_b)])[0]

    def llm_yes_no(self, questions: Sequence[str], context: str) -> list[str]:
        if not 1 <= len(questions) <= 8:
            raise ValueError("expected between 1 and 8 questions")
        payload = self._post("chat", {"context": context, "questions": list(questions)})
        text = payload.get("text")
        if not isinstance(text, str):
            raise ProtocolViolation("chat: missing text field", kind="chat")
        return parse_yes_no(text, len(questions))
