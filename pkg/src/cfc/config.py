"""Engine configuration: thresholds, split params, providers, paths.

Every field has a default so an empty JSON object is a valid config; unknown
keys are rejected so typos fail loudly. Relative paths resolve against the
config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

from .caption_curation import CUE_LIST_VERSION
from .errors import ConfigError
from .filter_sample import SamplePlan, Thresholds
from .providers import DEFAULT_DIM, ProviderEndpoint
from .scene_split import SplitParams

_DEF_AESTHETIC_BINS = [i * 0.5 for i in range(21)]          # 0..10
_DEF_MOTION_BINS = [float(i) for i in range(21)]            # 0..20
_DEF_OCR_BINS = [i * 0.5 for i in range(21)]                # 0..10
_DEF_TC_BINS = [round(-1.0 + i * 0.1, 1) for i in range(21)]  # -1..1


@dataclass(frozen=True)
class ReportBins:
    aesthetic: tuple[float, ...] = tuple(_DEF_AESTHETIC_BINS)
    motion: tuple[float, ...] = tuple(_DEF_MOTION_BINS)
    ocr: tuple[float, ...] = tuple(_DEF_OCR_BINS)
    tc: tuple[float, ...] = tuple(_DEF_TC_BINS)

    def as_dict(self) -> dict[str, Sequence[float]]:
        return {
            "aesthetic": list(self.aesthetic),
            "motion": list(self.motion),
            "ocr": list(self.ocr),
            "tc": list(self.tc),
        }


@dataclass(frozen=True)
class ProviderSettings:
    backend: str = "reference"  # "reference" | "http"
    dim: int = DEFAULT_DIM
    endpoints: dict[str, ProviderEndpoint] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.backend not in ("reference", "http"):
            raise ConfigError(f"unknown provider backend {self.backend!r}")
        if self.dim < 1:
            raise ConfigError("embedding dim must be positive")


@dataclass(frozen=True)
class DataPaths:
    """Corpus inputs and pipeline outputs, resolved to absolute paths on load."""

    videos_dir: str = "videos"
    metrics_dir: str = "metrics"
    ocr_sidecar: str = "ocr_regions.json"
    captions_file: str = "captions.jsonl"
    workdir: str = "work"
    thumbnails_dir: str = ""


@dataclass(frozen=True)
class CurationConfig:
    split: SplitParams = field(default_factory=SplitParams)
    thresholds: Thresholds = field(default_factory=Thresholds)
    sample: SamplePlan = field(default_factory=lambda: SamplePlan(target_total=200, seed=0))
    providers: ProviderSettings = field(default_factory=ProviderSettings)
    report_bins: ReportBins = field(default_factory=ReportBins)
    data: DataPaths = field(default_factory=DataPaths)
    workers: int = 0  # 0 = available parallelism
    review_enabled: bool = False
    cue_list_version: int = CUE_LIST_VERSION

    def __post_init__(self) -> None:
        if self.workers < 0:
            raise ConfigError("workers must be >= 0")
        if self.cue_list_version != CUE_LIST_VERSION:
            raise ConfigError(
                f"cue list version {self.cue_list_version} not supported "
                f"(engine ships version {CUE_LIST_VERSION})"
            )


def _build(cls, data: Mapping[str, Any], context: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {', '.join(sorted(unknown))}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {context} section: {exc}") from exc


def _parse_endpoints(data: Mapping[str, Any]) -> dict[str, ProviderEndpoint]:
    from .providers import PROVIDER_KINDS

    endpoints = {}
    for kind, raw in data.items():
        if kind not in PROVIDER_KINDS:
            raise ConfigError(f"unknown provider kind {kind!r}")
        if not isinstance(raw, Mapping):
            raise ConfigError(f"endpoint {kind!r} must be an object")
        endpoints[kind] = _build(ProviderEndpoint, raw, f"endpoint {kind}")
    return endpoints


def config_from_dict(data: Mapping[str, Any], base_dir: Path | None = None) -> CurationConfig:
    """Validate a raw config mapping; unknown keys anywhere are an error."""
    if not isinstance(data, Mapping):
        raise ConfigError("config root must be a JSON object")
    allowed = {f.name for f in fields(CurationConfig)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    sections: dict[str, Any] = {}
    if "split" in data:
        sections["split"] = _build(SplitParams, data["split"], "split")
    if "thresholds" in data:
        sections["thresholds"] = _build(Thresholds, data["thresholds"], "thresholds")
    if "sample" in data:
        sections["sample"] = _build(SamplePlan, data["sample"], "sample")
    if "providers" in data:
        raw = dict(data["providers"])
        if "endpoints" in raw:
            raw["endpoints"] = _parse_endpoints(raw["endpoints"])
        sections["providers"] = _build(ProviderSettings, raw, "providers")
    if "report_bins" in data:
        raw = {k: tuple(float(x) for x in v) for k, v in data["report_bins"].items()}
        sections["report_bins"] = _build(ReportBins, raw, "report_bins")
    if "data" in data:
        sections["data"] = _build(DataPaths, data["data"], "data")
    for key in ("workers", "review_enabled", "cue_list_version"):
        if key in data:
            sections[key] = data[key]

    config = _build(CurationConfig, sections, "config")
    if base_dir is not None:
        config = _resolve_paths(config, base_dir)
    return config


def _resolve_paths(config: CurationConfig, base_dir: Path) -> CurationConfig:
    resolved = {}
    for f in fields(DataPaths):
        value = getattr(config.data, f.name)
        if value and not Path(value).is_absolute():
            value = str((base_dir / value).resolve())
        resolved[f.name] = value
    from dataclasses import replace

    return replace(config, data=DataPaths(**resolved))


def load_config(path: str | Path) -> CurationConfig:
    """Load and validate a JSON config file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc.msg}") from exc
    return config_from_dict(data, base_dir=path.parent)


def default_config(base_dir: Path | None = None) -> CurationConfig:
    config = CurationConfig()
    if base_dir is not None:
        config = _resolve_paths(config, base_dir)
    return config
