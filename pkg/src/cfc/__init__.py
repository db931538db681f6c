"""Coarse-to-fine curation engine for video-text training corpora."""

from .catalog import (
    CaptionRecord,
    CategoryLabel,
    ClipRecord,
    ScoreSet,
    TriageResult,
    read_manifest,
    write_manifest,
)
from .config import CurationConfig, load_config
from .filter_sample import SamplePlan, Thresholds
from .scene_split import SplitParams

__version__ = "0.1.0"

__all__ = [
    "CaptionRecord",
    "CategoryLabel",
    "ClipRecord",
    "CurationConfig",
    "SamplePlan",
    "ScoreSet",
    "SplitParams",
    "Thresholds",
    "TriageResult",
    "load_config",
    "read_manifest",
    "write_manifest",
    "__version__",
]
