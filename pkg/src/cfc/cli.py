"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 provider error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import caption_curation as cc
from . import pipeline
from .catalog import distribution_report, read_manifest, write_manifest
from .config import CurationConfig, default_config, load_config
from .errors import ConfigError, CurationError, ManifestError, ProviderError
from .filter_sample import SamplePlan, apply_thresholds, balanced_sample
from .scene_split import SplitParams, split_video_file


def _load_config(args: argparse.Namespace) -> CurationConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return default_config(Path.cwd())


def _override_split(config: CurationConfig, args: argparse.Namespace) -> SplitParams:
    params = config.split
    overrides = {}
    for cli_name, field_name in (
        ("threshold_coarse", "threshold_coarse"),
        ("threshold_fine", "threshold_fine"),
        ("min_scene_frames", "min_scene_frames"),
        ("max_clip_seconds", "max_clip_seconds"),
    ):
        value = getattr(args, cli_name, None)
        if value is not None:
            overrides[field_name] = value
    return replace(params, **overrides) if overrides else params


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    if args.seed is not None:
        config = replace(config, sample=replace(config.sample, seed=args.seed))
    stages = args.stages.split(",") if args.stages else None
    states = pipeline.run_pipeline(config, stages)
    for state in states:
        counts = ", ".join(f"{k}={v}" for k, v in sorted(state.record_counts.items()))
        print(f"[{state.stage_name}] -> {state.output_manifest.name}: {counts or 'empty'}")
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    config = _load_config(args)
    params = _override_split(config, args)
    metrics_dir = Path(args.metrics)
    if not metrics_dir.is_dir():
        raise ManifestError(f"metrics directory not found: {metrics_dir}")
    records = []
    for metric_file in sorted(metrics_dir.glob("*.json")):
        records.extend(split_video_file(metric_file, params))
    records.sort(key=lambda r: r.clip_id)
    write_manifest(records, "split", args.out, complete=True)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    config = load_config(args.providers) if args.providers else _load_config(args)
    if args.dim is not None:
        config = replace(config, providers=replace(config.providers, dim=args.dim))
    records = read_manifest(args.infile)
    scored = pipeline.stage_score(config, records)
    write_manifest(scored, "scored", args.out, complete=True)
    print(f"wrote {len(scored)} records to {args.out}")
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    config = _load_config(args)
    records = [r for r in read_manifest(args.infile) if r.status == "scored"]
    kept, rejected = apply_thresholds(records, config.thresholds)
    out = sorted(kept + rejected, key=lambda r: r.clip_id)
    write_manifest(out, "filtered", args.out, complete=True)
    print(f"kept {len(kept)}, rejected {len(rejected)} -> {args.out}")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    config = _load_config(args)
    plan = config.sample
    if args.target is not None:
        plan = SamplePlan(target_total=args.target, seed=plan.seed)
    if args.seed is not None:
        plan = SamplePlan(target_total=plan.target_total, seed=args.seed)
    records = [r for r in read_manifest(args.infile) if r.status == "scored"]
    sampled = balanced_sample(records, plan)
    write_manifest(sampled, "sampled", args.out, complete=True)
    print(f"sampled {len(sampled)} of {len(records)} -> {args.out}")
    return 0


def cmd_caption_filter(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.align_min is not None:
        config = replace(config, thresholds=replace(config.thresholds, align_min=args.align_min))
    if args.captions:
        config = replace(config, data=replace(config.data, captions_file=args.captions))
    llm = None
    if args.llm == "off":
        llm = "off"
    elif args.llm and args.llm not in ("reference",):
        from .providers import HttpProviderClient, ProviderEndpoint

        llm = HttpProviderClient({"chat": ProviderEndpoint(base_url=args.llm)})
    records = read_manifest(args.infile)
    out = pipeline.stage_caption_filter(config, records, llm=llm)
    write_manifest(out, "captioned", args.out, complete=True)
    kept = sum(1 for r in out if r.status == "sampled")
    print(f"kept {kept}, rejected {len(out) - kept} -> {args.out}")
    return 0


def cmd_vocab_report(args: argparse.Namespace) -> int:
    records = read_manifest(args.infile)
    corpus = [cc.tokenize(r.caption.text) for r in records if r.caption is not None]
    stats = cc.vocab_stats(corpus, cc.ReferenceTagger())
    payload = {"captions": len(corpus), **stats.to_dict()}
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2)
        handle.write("\n")
    print(f"wrote vocabulary stats for {len(corpus)} captions to {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = _load_config(args)
    distribution_report(args.before, args.after, config.report_bins.as_dict(), args.out)
    print(f"wrote report.json and CSV tables to {args.out}")
    return 0


def cmd_serve_review(args: argparse.Namespace) -> int:
    from .review import serve_review

    config = _load_config(args)
    workdir = Path(config.data.workdir)
    manifest = pipeline.manifest_path(workdir, "final")
    if not manifest.is_file():
        manifest = pipeline.manifest_path(workdir, "sampled")
    if not manifest.is_file():
        raise ManifestError("no sampled or final manifest found; run the pipeline first")
    records = [r for r in read_manifest(manifest) if r.status in ("sampled", "final")]
    try:
        server = serve_review(
            records,
            workdir / "decisions.jsonl",
            args.port,
            host=args.host,
            thumbnails_dir=config.data.thumbnails_dir or None,
            static_dir=args.static,
        )
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 4
    print(f"review service on http://{args.host}:{args.port}/ ({len(records)} clips)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def cmd_finetune(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.review is not None:
        config = replace(config, review_enabled=args.review == "on")
    kept, dropped = pipeline.run_finetune(config, args.infile, args.decisions, args.out)
    print(f"kept {len(kept)}, dropped {len(dropped)} -> {args.out}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    from .synthetic import generate_corpus

    paths = generate_corpus(args.out, seed=args.seed)
    print(f"generated {paths.clip_count}-clip corpus under {paths.root}")
    if args.thumbnails:
        from .scene_split import SplitParams
        from .synthetic import render_thumbnails

        clips = []
        for metric_file in sorted(paths.metrics_dir.glob("*.json")):
            clips.extend(c for c in split_video_file(metric_file, SplitParams()) if c.status == "split")
        count = render_thumbnails(paths.videos_dir, clips, paths.root / "thumbs")
        print(f"rendered {count} thumbnails")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfc", description="coarse-to-fine video corpus curation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="engine config JSON")

    p = sub.add_parser("run", help="run the stage pipeline with resumption")
    add_config(p)
    p.add_argument("--stages", help="comma-separated contiguous stage subset")
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("split", help="scene-split frame-metric files")
    add_config(p)
    p.add_argument("--metrics", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold-coarse", dest="threshold_coarse", type=float)
    p.add_argument("--threshold-fine", dest="threshold_fine", type=float)
    p.add_argument("--min-scene-frames", dest="min_scene_frames", type=int)
    p.add_argument("--max-clip-seconds", dest="max_clip_seconds", type=float)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("score", help="compute coarse-curation scores")
    add_config(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--providers", help="config JSON carrying provider settings")
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("filter", help="apply quality thresholds")
    add_config(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sample", help="category-balanced sampling")
    add_config(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--target", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("caption-filter", help="alignment gating and caption triage")
    add_config(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--captions", help="caption sidecar JSONL")
    p.add_argument("--llm", help="chat backend URL, 'reference', or 'off'")
    p.add_argument("--align-min", dest="align_min", type=float)
    p.set_defaults(func=cmd_caption_filter)

    p = sub.add_parser("vocab-report", help="noun/verb vocabulary statistics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vocab_report)

    p = sub.add_parser("report", help="before/after distribution report")
    add_config(p)
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve-review", help="serve the human review API and UI")
    add_config(p)
    p.add_argument("--port", type=int, default=8731)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="directory with the built review UI")
    p.set_defaults(func=cmd_serve_review)

    p = sub.add_parser("finetune", help="stage-4 strict selection with review decisions")
    add_config(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--decisions", required=True)
    p.add_argument("--review", choices=("on", "off"))
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("synth", help="generate the bundled synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--thumbnails", action="store_true")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return 3
    except (ManifestError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except CurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
