from __future__ import annotations

import hashlib
import json
import random
from dataclasses import replace

import pytest

from cfc.catalog import (
    CATEGORY_LABELS,
    CategoryLabel,
    ClipRecord,
    ManifestError,
    ScoreSet,
    distribution_report,
    make_clip_id,
    manifest_is_complete,
    read_manifest,
    read_manifest_info,
    status_rank,
    write_manifest,
)

from conftest import random_record


def _records(n: int, seed: int = 1, status: str = "scored") -> list[ClipRecord]:
    rng = random.Random(seed)
    seen = {}
    while len(seen) < n:
        record = random_record(rng, status=status)
        seen[record.clip_id] = record
    return sorted(seen.values(), key=lambda r: r.clip_id)


def test_clip_id_is_content_addressed():
    a = make_clip_id("vid", 0, 100)
    assert a == make_clip_id("vid", 0, 100)
    assert a != make_clip_id("vid", 0, 101)
    assert len(a) == 32 and a == a.lower()
    int(a, 16)  # valid hex


def test_record_validation():
    with pytest.raises(ValueError):
        ClipRecord("x", "v", 10, 10, 30.0, 10, 10)  # empty span
    with pytest.raises(ValueError):
        ClipRecord("x", "v", 0, 10, 30.0, 10, 10, status="filtered_out")  # missing reason
    with pytest.raises(ValueError):
        ClipRecord("x", "v", 0, 10, 30.0, 10, 10, status="split", reject_reason="nope")
    with pytest.raises(ValueError):
        ScoreSet(s_quality=5, s_ocr=-1, s_tc=0, s_motion=0, category_similarity=0)
    with pytest.raises(ValueError):
        ScoreSet(s_quality=5, s_ocr=0, s_tc=1.5, s_motion=0, category_similarity=0)


def test_status_transitions_forward_only():
    record = _records(1)[0]
    later = record.advance("sampled")
    assert later.status == "sampled"
    with pytest.raises(ValueError):
        later.advance("scored")
    assert status_rank("split") < status_rank("scored") < status_rank("final")


def test_empty_manifest_is_header_only(tmp_path):
    path = write_manifest([], "split", tmp_path / "m.jsonl")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == ['{"schema_version":1,"stage":"split"}']
    assert read_manifest(path) == []


def test_unsorted_input_rejected(tmp_path):
    a, b = _records(2)
    with pytest.raises(ManifestError, match="unsorted input"):
        write_manifest([b, a], "scored", tmp_path / "m.jsonl")


def test_write_twice_byte_identical(tmp_path):
    records = _records(3)
    p1 = write_manifest(records, "scored", tmp_path / "m1.jsonl")
    p2 = write_manifest(records, "scored", tmp_path / "m2.jsonl")
    h1 = hashlib.sha256(p1.read_bytes()).hexdigest()
    h2 = hashlib.sha256(p2.read_bytes()).hexdigest()
    assert h1 == h2


def test_round_trip_random_records(tmp_path):
    records = _records(100, seed=7)
    path = write_manifest(records, "scored", tmp_path / "m.jsonl")
    back = read_manifest(path)
    assert back == records


def test_unknown_fields_preserved(tmp_path):
    record = _records(1)[0]
    payload = record.to_dict()
    payload["future_field"] = {"nested": [1, 2, 3]}
    payload["scores"]["s_experimental"] = 0.25
    path = tmp_path / "m.jsonl"
    path.write_text(
        '{"schema_version":1,"stage":"scored"}\n' + json.dumps(payload) + "\n", encoding="utf-8"
    )
    (back,) = read_manifest(path)
    assert back.extra["future_field"] == {"nested": [1, 2, 3]}
    assert back.scores.extra["s_experimental"] == 0.25
    # and writing again keeps them verbatim
    rewritten = write_manifest([back], "scored", tmp_path / "m2.jsonl")
    again = read_manifest(rewritten)[0]
    assert again == back


try:
    from hypothesis import given, settings, strategies as st

    _status = st.sampled_from(["split", "scored", "sampled", "final"])
    _text = st.text(
        alphabet=st.characters(blacklist_categories=("Cs",)), min_size=0, max_size=40
    )

    @st.composite
    def _record_strategy(draw):
        start = draw(st.integers(min_value=0, max_value=10_000))
        end = start + draw(st.integers(min_value=1, max_value=2_000))
        status = draw(_status)
        scores = None
        category = None
        if status != "split":
            scores = ScoreSet(
                s_quality=draw(st.floats(0, 10, allow_nan=False)),
                s_ocr=draw(st.floats(0, 20, allow_nan=False)),
                s_tc=draw(st.floats(-1, 1, allow_nan=False)),
                s_motion=draw(st.floats(0, 50, allow_nan=False)),
                category_similarity=draw(st.floats(-1, 1, allow_nan=False)),
                extra=draw(
                    st.dictionaries(
                        st.text(min_size=1, max_size=10).filter(
                            lambda k: k
                            not in (
                                "s_quality", "s_ocr", "s_tc", "s_motion",
                                "category_similarity", "s_align",
                            )
                        ),
                        st.floats(allow_nan=False),
                        max_size=2,
                    )
                ),
            )
            category = draw(st.sampled_from(CATEGORY_LABELS))
        source = draw(st.text(min_size=1, max_size=20))
        return ClipRecord(
            clip_id=make_clip_id(source, start, end),
            source_video_id=source,
            start_frame=start,
            end_frame=end,
            fps=draw(st.floats(1, 120, allow_nan=False, exclude_min=True)),
            width=draw(st.integers(1, 4096)),
            height=draw(st.integers(1, 4096)),
            status=status,
            scores=scores,
            category=category,
            extra=draw(
                st.dictionaries(
                    st.text(min_size=1, max_size=8).filter(
                        lambda k: k
                        not in (
                            "clip_id", "source_video_id", "start_frame", "end_frame",
                            "fps", "width", "height", "status", "reject_reason",
                            "scores", "category", "caption",
                        )
                    ),
                    _text,
                    max_size=3,
                )
            ),
        )

    @given(st.lists(_record_strategy(), max_size=20))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(tmp_path_factory, records):
        unique = {r.clip_id: r for r in records}
        ordered = sorted(unique.values(), key=lambda r: r.clip_id)
        path = tmp_path_factory.mktemp("prop") / "m.jsonl"
        write_manifest(ordered, "scored", path)
        assert read_manifest(path) == ordered

except ImportError:  # hypothesis is a dev extra
    pass


def test_malformed_line_cites_line_number(tmp_path):
    records = _records(3)
    path = write_manifest(records, "scored", tmp_path / "m.jsonl")
    lines = path.read_text(encoding="utf-8").splitlines()
    lines.insert(4, "{not json")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="line 5"):
        read_manifest(path)


def test_schema_version_mismatch(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text('{"schema_version":99,"stage":"split"}\n', encoding="utf-8")
    with pytest.raises(ManifestError, match="schema_version mismatch"):
        read_manifest(path)


def test_terminator_marks_completion(tmp_path):
    records = _records(4)
    open_path = write_manifest(records, "scored", tmp_path / "open.jsonl")
    done_path = write_manifest(records, "scored", tmp_path / "done.jsonl", complete=True)
    assert not manifest_is_complete(open_path)
    assert manifest_is_complete(done_path)
    info = read_manifest_info(done_path)
    assert info.complete and info.stage == "scored" and len(info.records) == 4


def test_terminator_count_mismatch(tmp_path):
    records = _records(4)
    path = write_manifest(records, "scored", tmp_path / "m.jsonl", complete=True)
    lines = path.read_text(encoding="utf-8").splitlines()
    del lines[2]  # drop a record, keep the terminator count
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="terminator count"):
        read_manifest(path)
    assert not manifest_is_complete(path)


def test_failed_write_leaves_prior_manifest_untouched(tmp_path):
    records = _records(3)
    path = write_manifest(records, "scored", tmp_path / "m.jsonl")
    before = path.read_bytes()
    poisoned = replace(records[0], extra={"payload": object()})  # not JSON-serializable
    with pytest.raises(TypeError):
        write_manifest([poisoned], "scored", path)
    assert path.read_bytes() == before
    assert not list(tmp_path.glob("*.tmp"))


def test_manifest_determinism_independent_of_input_order(tmp_path):
    records = _records(20, seed=3)
    shuffled = records[::-1]
    p1 = write_manifest(records, "scored", tmp_path / "a.jsonl")
    p2 = write_manifest(sorted(shuffled, key=lambda r: r.clip_id), "scored", tmp_path / "b.jsonl")
    assert p1.read_bytes() == p2.read_bytes()


# ---------------------------------------------------------------------------
# distribution report


def _bins() -> dict:
    return {
        "aesthetic": [0, 2.5, 5.0, 7.5, 10.0],
        "motion": [0, 5, 10, 20],
        "ocr": [0, 1, 2, 10],
        "tc": [-1.0, 0.0, 0.8, 1.0],
    }


def test_report_identical_manifests(tmp_path):
    records = _records(30, seed=5)
    before = write_manifest(records, "scored", tmp_path / "b.jsonl")
    after = write_manifest(records, "final", tmp_path / "a.jsonl")
    report = distribution_report(before, after, _bins(), tmp_path / "out")
    assert report["before"]["histograms"] == report["after"]["histograms"]
    assert report["before"]["categories"] == report["after"]["categories"]
    assert (tmp_path / "out" / "report.json").is_file()
    for dim in ("aesthetic", "motion", "ocr", "tc"):
        assert (tmp_path / "out" / f"report_{dim}.csv").is_file()


def test_report_filtered_tc_has_no_low_mass(tmp_path):
    records = _records(60, seed=9)
    survivors = [r for r in records if r.scores.s_tc >= 0.8]
    assert 0 < len(survivors) < len(records)
    before = write_manifest(records, "scored", tmp_path / "b.jsonl")
    after = write_manifest(survivors, "final", tmp_path / "a.jsonl")
    report = distribution_report(before, after, _bins(), tmp_path / "out")
    tc = report["after"]["histograms"]["tc"]
    # bins [-1,0) and [0,0.8) must be empty after the filter
    assert tc["counts"][0] == 0 and tc["counts"][1] == 0
    assert sum(tc["counts"]) == len(survivors)


def test_report_lists_all_14_categories(tmp_path):
    records = _records(5, seed=11)
    before = write_manifest(records, "scored", tmp_path / "b.jsonl")
    report = distribution_report(before, before, _bins(), tmp_path / "out")
    assert set(report["before"]["categories"]) == {label.value for label in CATEGORY_LABELS}
    assert len(report["before"]["categories"]) == 14
    csv_lines = (tmp_path / "out" / "report_category.csv").read_text().splitlines()
    assert len(csv_lines) == 15  # header + 14 rows
    assert CategoryLabel.CARTOON_2D.value in csv_lines[12]
