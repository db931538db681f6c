from __future__ import annotations

import json
from pathlib import Path

import pytest

from cfc.catalog import read_manifest, read_manifest_info
from cfc.config import config_from_dict, load_config
from cfc.errors import ConfigError, ManifestError, ProviderUnavailable
from cfc.pipeline import STAGE_NAMES, manifest_path, run_pipeline


def _load(corpus: Path, workdir: Path):
    config = load_config(corpus / "config.json")
    from dataclasses import replace

    return replace(config, data=replace(config.data, workdir=str(workdir)))


def _manifest_bytes(workdir: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(workdir.glob("manifest_*.jsonl"))}


def test_full_run_produces_all_manifests_and_report(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    states = run_pipeline(config)
    assert [s.stage_name for s in states] == list(STAGE_NAMES)
    workdir = Path(config.data.workdir)
    for name in ("split", "scored", "filtered", "sampled", "captioned", "final"):
        info = read_manifest_info(manifest_path(workdir, name))
        assert info.complete, name
    assert (workdir / "report.json").is_file()
    assert (workdir / "report_aesthetic.csv").is_file()
    final = read_manifest(manifest_path(workdir, "final"))
    assert final and all(r.status == "final" for r in final)
    assert all(r.caption is not None for r in final)


def test_rerun_is_idempotent(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    run_pipeline(config)
    before = _manifest_bytes(Path(config.data.workdir))
    states = run_pipeline(config)
    after = _manifest_bytes(Path(config.data.workdir))
    assert before == after
    assert all(s.completed for s in states)


def test_two_runs_byte_identical(small_corpus_dir, tmp_path):
    config_a = _load(small_corpus_dir, tmp_path / "a")
    config_b = _load(small_corpus_dir, tmp_path / "b")
    run_pipeline(config_a)
    run_pipeline(config_b)
    a = _manifest_bytes(Path(config_a.data.workdir))
    b = _manifest_bytes(Path(config_b.data.workdir))
    assert a == b
    ra = (Path(config_a.data.workdir) / "report.json").read_bytes()
    rb = (Path(config_b.data.workdir) / "report.json").read_bytes()
    assert ra == rb


def test_crash_resume_every_stage(small_corpus_dir, tmp_path):
    reference = _load(small_corpus_dir, tmp_path / "ref")
    run_pipeline(reference)
    ref_bytes = _manifest_bytes(Path(reference.data.workdir))

    stage_outputs = ["split", "scored", "filtered", "sampled", "captioned", "final"]
    for i, output_name in enumerate(stage_outputs):
        workdir = tmp_path / f"crash_{output_name}"
        config = _load(small_corpus_dir, workdir)
        # run cleanly up to the stage before the crash point
        if i > 0:
            run_pipeline(config, stages=list(STAGE_NAMES[:i]), emit_report=False)
        # simulate a crash mid-stage: partial, unterminated output plus a
        # stale temp file left behind
        victim = manifest_path(workdir, output_name)
        full = (Path(reference.data.workdir) / victim.name).read_text(encoding="utf-8")
        lines = full.splitlines()
        partial = lines[: max(1, int(len(lines) * 0.6))]
        if partial and partial[-1].startswith('{"stage_complete"'):
            partial = partial[:-1]
        workdir.mkdir(parents=True, exist_ok=True)
        victim.write_text("\n".join(partial) + "\n", encoding="utf-8")
        (workdir / f"{victim.name}.stale.tmp").write_text("junk", encoding="utf-8")
        # resume
        run_pipeline(config)
        assert _manifest_bytes(workdir) == ref_bytes, f"divergence after crash in {output_name}"


def test_missing_input_manifest_error(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    with pytest.raises(ManifestError, match="missing input manifest: scored"):
        run_pipeline(config, stages=["filter", "sample"])


def test_noncontiguous_stages_rejected(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    with pytest.raises(ConfigError, match="contiguous"):
        run_pipeline(config, stages=["split", "filter"])
    with pytest.raises(ConfigError, match="unknown stage"):
        run_pipeline(config, stages=["wash"])


def test_partial_stage_range_then_continue(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    run_pipeline(config, stages=["split", "score"], emit_report=False)
    workdir = Path(config.data.workdir)
    assert manifest_path(workdir, "scored").is_file()
    assert not manifest_path(workdir, "filtered").is_file()
    run_pipeline(config, stages=["filter", "sample", "caption-filter", "finalize"])
    assert manifest_path(workdir, "final").is_file()


def test_provider_outage_aborts_stage_without_output(small_corpus_dir, tmp_path):
    from dataclasses import replace

    config = _load(small_corpus_dir, tmp_path / "work")
    run_pipeline(config, stages=["split"], emit_report=False)
    dead = config_from_dict(
        {
            "providers": {
                "backend": "http",
                "endpoints": {
                    "embed_text": {
                        "base_url": "http://127.0.0.1:9",
                        "timeout_ms": 200,
                        "retry_budget": 0,
                    }
                },
            }
        }
    )
    broken = replace(config, providers=dead.providers)
    with pytest.raises(ProviderUnavailable):
        run_pipeline(broken, stages=["score"])
    assert not manifest_path(Path(config.data.workdir), "scored").is_file()
    # recovery with the real backend resumes at the aborted stage
    run_pipeline(config, stages=["score"], emit_report=False)
    assert manifest_path(Path(config.data.workdir), "scored").is_file()


def test_stage_outputs_respect_status_flow(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    run_pipeline(config)
    workdir = Path(config.data.workdir)
    split = read_manifest(manifest_path(workdir, "split"))
    assert {r.status for r in split} <= {"split", "filtered_out"}
    scored = read_manifest(manifest_path(workdir, "scored"))
    assert {r.status for r in scored} <= {"scored", "scoring_failed"}
    filtered = read_manifest(manifest_path(workdir, "filtered"))
    assert {r.status for r in filtered} <= {"scored", "filtered_out"}
    sampled = read_manifest(manifest_path(workdir, "sampled"))
    assert {r.status for r in sampled} == {"sampled"}
    captioned = read_manifest(manifest_path(workdir, "captioned"))
    assert {r.status for r in captioned} <= {"sampled", "caption_rejected"}
    # monotone per-clip transitions across consecutive manifests
    from cfc.catalog import status_rank

    chain = [split, scored, filtered, sampled, captioned]
    for earlier, later in zip(chain, chain[1:]):
        earlier_by_id = {r.clip_id: r for r in earlier}
        for record in later:
            if record.clip_id in earlier_by_id:
                assert status_rank(record.status) >= status_rank(
                    earlier_by_id[record.clip_id].status
                )


def test_caption_stage_attaches_alignment_and_triage(small_corpus_dir, tmp_path):
    config = _load(small_corpus_dir, tmp_path / "work")
    run_pipeline(config)
    workdir = Path(config.data.workdir)
    captioned = read_manifest(manifest_path(workdir, "captioned"))
    kept = [r for r in captioned if r.status == "sampled"]
    assert kept
    for record in kept:
        assert record.scores.s_align is not None
        assert record.caption.triage is not None
        assert record.caption.triage.accepted
        assert record.caption.word_count == len(record.caption.text.split())
    rejected = [r for r in captioned if r.status == "caption_rejected"]
    reasons = {r.reject_reason for r in rejected}
    assert reasons  # the synthetic corpus plants failure captions
    assert reasons <= {
        "missing_caption",
        "low_alignment",
        "st",
        "flg",
        "redup",
        "st,flg",
        "st,redup",
        "flg,redup",
        "st,flg,redup",
    }


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown config keys"):
        config_from_dict({"thresholdz": {}})
    with pytest.raises(ConfigError, match="unknown thresholds keys"):
        config_from_dict({"thresholds": {"aesthetic_minimum": 4}})
    with pytest.raises(ConfigError, match="unknown provider kind"):
        config_from_dict({"providers": {"endpoints": {"teleport": {}}}})


def test_config_defaults_carry_paper_constants():
    config = config_from_dict({})
    assert config.thresholds.finetune_video_aesthetic_min == 5.5
    assert config.thresholds.finetune_image_aesthetic_min == 7.0


def test_config_resolves_relative_paths(tmp_path):
    cfg_file = tmp_path / "nested" / "config.json"
    cfg_file.parent.mkdir(parents=True)
    cfg_file.write_text(json.dumps({"data": {"workdir": "out"}}), encoding="utf-8")
    config = load_config(cfg_file)
    assert Path(config.data.workdir) == (tmp_path / "nested" / "out").resolve()
