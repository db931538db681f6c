"""Caption triage: alignment gating, failure-mode detection, vocab statistics.

Three caption failure classes are screened: scene-transition leakage,
frame-by-frame description, and reduplicated endings. An LLM backend answers
the three yes/no questions; deterministic heuristic detectors double as the
offline oracle and the fallback whenever an answer cannot be parsed.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .catalog import NO, TriageResult, UNDETERMINED, YES
from .errors import ProviderError
from .lexicon import NOUNS, VERBS

CUE_LIST_VERSION = 1

#: Sentence-initial cues marking frame-by-frame description. "frame <number>"
#: matches the token "frame" followed by a digit token.
FRAME_LEVEL_CUES: tuple[tuple[str, ...], ...] = (
    ("in", "the", "first", "frame"),
    ("in", "the", "second", "frame"),
    ("in", "the", "next", "frame"),
    ("frame", "<number>"),
    ("the", "first", "image"),
    ("the", "second", "image"),
    ("in", "this", "frame"),
)

#: Cues marking a described scene change anywhere in a sentence.
SCENE_TRANSITION_CUES: tuple[tuple[str, ...], ...] = (
    ("the", "scene", "changes"),
    ("the", "scene", "shifts"),
    ("cuts", "to"),
    ("the", "video", "then", "shows", "a", "different"),
    ("in", "a", "different", "scene"),
    ("the", "camera", "switches", "to"),
)

TRIAGE_PREAMBLE = "Please respond with 'Yes' or 'No' to the following questions:"
TRIAGE_QUESTIONS: tuple[str, str, str] = (
    "Given the preceding video caption, is there an indication of a possible scene transition?",
    "Does the preceding video caption suggest a shift towards a series of descriptive image captions?",
    "Does the video caption conclude with repetitive phrases or sentences?",
)


def build_triage_prompt(caption: str) -> str:
    """The full chat prompt: caption first, then the three questions."""
    lines = [caption, "", TRIAGE_PREAMBLE]
    lines.extend(f"- {q}" for q in TRIAGE_QUESTIONS)
    return "\n".join(lines)


_SENTENCE_SPLIT = re.compile(r"[.!?]+")
_NON_WORD = re.compile(r"[\W_]+", re.UNICODE)


@dataclass(frozen=True)
class TokenizedCaption:
    """Lowercased letter/digit tokens plus sentence spans over them."""

    tokens: tuple[str, ...]
    sentences: tuple[tuple[int, int], ...]

    def sentence_tokens(self, i: int) -> tuple[str, ...]:
        start, end = self.sentences[i]
        return self.tokens[start:end]


def tokenize(text: str) -> TokenizedCaption:
    """Split into sentences on .!? and into cleaned, lowercased tokens."""
    tokens: list[str] = []
    sentences: list[tuple[int, int]] = []
    for chunk in _SENTENCE_SPLIT.split(text):
        start = len(tokens)
        for word in chunk.split():
            cleaned = _NON_WORD.sub("", word).lower()
            if cleaned:
                tokens.append(cleaned)
        if len(tokens) > start:
            sentences.append((start, len(tokens)))
    return TokenizedCaption(tokens=tuple(tokens), sentences=tuple(sentences))


def word_count(text: str) -> int:
    """Whitespace token count, the convention caption records store."""
    return len(text.split())


def detect_reduplication(caption: TokenizedCaption) -> bool:
    """Looping generation: a 3..8-gram repeated 3x back-to-back, or the final
    sentence token-identical to the one before it."""
    tokens = caption.tokens
    for n in range(3, 9):
        for i in range(0, len(tokens) - 3 * n + 1):
            first = tokens[i : i + n]
            if first == tokens[i + n : i + 2 * n] and first == tokens[i + 2 * n : i + 3 * n]:
                return True
    if len(caption.sentences) >= 2:
        last = len(caption.sentences) - 1
        if caption.sentence_tokens(last) == caption.sentence_tokens(last - 1):
            return True
    return False


def _starts_with_cue(sentence: tuple[str, ...], cue: tuple[str, ...]) -> bool:
    if len(sentence) < len(cue):
        return False
    for got, want in zip(sentence, cue):
        if want == "<number>":
            if not got.isdigit():
                return False
        elif got != want:
            return False
    return True


def detect_frame_level(caption: TokenizedCaption) -> bool:
    """Frame-by-frame description: two or more sentences open with a frame cue."""
    hits = 0
    for i in range(len(caption.sentences)):
        sentence = caption.sentence_tokens(i)
        if any(_starts_with_cue(sentence, cue) for cue in FRAME_LEVEL_CUES):
            hits += 1
            if hits >= 2:
                return True
    return False


def _contains_cue(sentence: tuple[str, ...], cue: tuple[str, ...]) -> bool:
    if len(sentence) < len(cue):
        return False
    return any(sentence[i : i + len(cue)] == cue for i in range(len(sentence) - len(cue) + 1))


def detect_scene_transition(caption: TokenizedCaption) -> bool:
    """A sentence describes a cut to another scene."""
    for i in range(len(caption.sentences)):
        sentence = caption.sentence_tokens(i)
        if any(_contains_cue(sentence, cue) for cue in SCENE_TRANSITION_CUES):
            return True
    return False


def heuristic_triage(caption: TokenizedCaption) -> TriageResult:
    """Run all three detectors; always yields definite yes/no answers."""
    return TriageResult(
        scene_transition=YES if detect_scene_transition(caption) else NO,
        frame_level=YES if detect_frame_level(caption) else NO,
        reduplication=YES if detect_reduplication(caption) else NO,
    )


def llm_triage(caption: str, llm) -> tuple[TriageResult, str]:
    """Ask the chat backend the three questions; heuristics fill the gaps.

    Returns (result, decision_source). The source is ``llm`` only when all
    three answers parsed cleanly; any undetermined answer falls back to the
    corresponding heuristic detector, and a dead backend falls back entirely.
    """
    if not caption:
        raise ValueError("caption must be nonempty")
    tokenized = tokenize(caption)
    fallback = heuristic_triage(tokenized)
    try:
        answers = llm.llm_yes_no(TRIAGE_QUESTIONS, caption)
    except ProviderError:
        return fallback, "heuristic"
    fallback_flags = (fallback.scene_transition, fallback.frame_level, fallback.reduplication)
    resolved = []
    all_parsed = True
    for answer, heuristic in zip(answers, fallback_flags):
        if answer == UNDETERMINED:
            resolved.append(heuristic)
            all_parsed = False
        else:
            resolved.append(answer)
    result = TriageResult(
        scene_transition=resolved[0], frame_level=resolved[1], reduplication=resolved[2]
    )
    return result, ("llm" if all_parsed else "heuristic")


def triage_reject_reason(result: TriageResult) -> str | None:
    """Comma-joined short names of the flags that fired, or None if accepted.

    Only a definite ``yes`` rejects; ``undetermined`` alone never does.
    """
    parts = []
    if result.scene_transition == YES:
        parts.append("st")
    if result.frame_level == YES:
        parts.append("flg")
    if result.reduplication == YES:
        parts.append("redup")
    return ",".join(parts) if parts else None


def alignment_score(caption_embedding, video_embedding) -> float:
    """Cosine similarity between caption and video embeddings."""
    from .scoring import cosine_similarity

    return cosine_similarity(caption_embedding.values, video_embedding.values)


# ---------------------------------------------------------------------------
# Vocabulary statistics


@dataclass(frozen=True)
class VocabStats:
    distinct_nouns: int
    valid_nouns: int
    distinct_verbs: int
    valid_verbs: int
    avg_nouns_per_caption: float
    avg_verbs_per_caption: float

    @property
    def vn_dn_ratio(self) -> float:
        return self.valid_nouns / self.distinct_nouns if self.distinct_nouns else 0.0

    @property
    def vv_dv_ratio(self) -> float:
        return self.valid_verbs / self.distinct_verbs if self.distinct_verbs else 0.0

    def to_dict(self) -> dict:
        return {
            "distinct_nouns": self.distinct_nouns,
            "valid_nouns": self.valid_nouns,
            "distinct_verbs": self.distinct_verbs,
            "valid_verbs": self.valid_verbs,
            "avg_nouns_per_caption": self.avg_nouns_per_caption,
            "avg_verbs_per_caption": self.avg_verbs_per_caption,
            "vn_dn_ratio": self.vn_dn_ratio,
            "vv_dv_ratio": self.vv_dv_ratio,
        }


class ReferenceTagger:
    """Lexicon lookup with a light suffix fallback; pluggable stand-in POS tagger."""

    def __call__(self, token: str) -> str:
        if token in NOUNS:
            return "noun"
        if token in VERBS:
            return "verb"
        # bare plural / third-person forms
        if token.endswith("s") and len(token) > 2:
            stem = token[:-1]
            if stem in NOUNS:
                return "noun"
            if stem in VERBS:
                return "verb"
        if token.endswith(("ing", "ed")) and len(token) > 4:
            return "verb"
        if token.endswith(("tion", "ness")):
            return "noun"
        return "other"


def vocab_stats(
    corpus: Sequence[TokenizedCaption], tagger: Callable[[str], str]
) -> VocabStats:
    """Noun/verb vocabulary breadth and density over a caption corpus.

    A distinct noun (verb) is "valid" when its total occurrence count across
    the corpus is strictly greater than 10.
    """
    noun_counts: Counter[str] = Counter()
    verb_counts: Counter[str] = Counter()
    noun_per_caption: list[int] = []
    verb_per_caption: list[int] = []
    for caption in corpus:
        nouns = 0
        verbs = 0
        for token in caption.tokens:
            tag = tagger(token)
            if tag == "noun":
                noun_counts[token] += 1
                nouns += 1
            elif tag == "verb":
                verb_counts[token] += 1
                verbs += 1
        noun_per_caption.append(nouns)
        verb_per_caption.append(verbs)
    n = len(corpus)
    return VocabStats(
        distinct_nouns=len(noun_counts),
        valid_nouns=sum(1 for c in noun_counts.values() if c > 10),
        distinct_verbs=len(verb_counts),
        valid_verbs=sum(1 for c in verb_counts.values() if c > 10),
        avg_nouns_per_caption=sum(noun_per_caption) / n if n else 0.0,
        avg_verbs_per_caption=sum(verb_per_caption) / n if n else 0.0,
    )
