from __future__ import annotations

import json
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from cfc.catalog import ClipRecord, make_clip_id
from cfc.errors import EmptyInput, ProtocolViolation, ProviderUnavailable
from cfc.providers import (
    ArrayFrameStore,
    FrameRef,
    FrameResolver,
    HttpProviderClient,
    ProviderEndpoint,
    ReferenceProviderClient,
    block_matching_flow,
    parse_yes_no,
    trigram_embedding,
)
from cfc.scoring import category_prompt
from cfc.catalog import CATEGORY_LABELS


def _clip(source: str, start: int, end: int) -> ClipRecord:
    return ClipRecord(
        clip_id=make_clip_id(source, start, end),
        source_video_id=source,
        start_frame=start,
        end_frame=end,
        fps=10.0,
        width=32,
        height=32,
    )


@pytest.fixture()
def reference_client():
    rng = np.random.default_rng(42)
    frames = rng.integers(0, 256, size=(20, 32, 32, 3), dtype=np.uint8)
    frames[0] = 0  # solid black
    frames[1] = frames[2]  # identical pair
    store = ArrayFrameStore({"vid": frames})
    clip = _clip("vid", 0, 20)
    resolver = FrameResolver([clip])
    client = ReferenceProviderClient(
        store, resolver, ocr_sidecar={"vid": {"3": 4}}
    )
    return client, clip


def test_black_frame_embedding_is_black_histogram(reference_client):
    client, clip = reference_client
    vec = client.embed_image(FrameRef(clip.clip_id, 0))
    # all mass in the (0,0,0) color bin
    assert vec.values[0] == pytest.approx(1.0)
    assert np.count_nonzero(vec.values) == 1
    assert vec.norm() == pytest.approx(1.0, abs=1e-6)


def test_embedding_determinism(reference_client):
    client, clip = reference_client
    ref = FrameRef(clip.clip_id, 5)
    a = client.embed_image(ref)
    b = client.embed_image(ref)
    assert np.array_equal(a.values, b.values)
    t1 = client.embed_text("a photo of a animal")
    t2 = client.embed_text("a photo of a animal")
    assert np.array_equal(t1.values, t2.values)


def test_embeddings_unit_norm_and_self_cosine(reference_client):
    client, clip = reference_client
    for i in range(10):
        vec = client.embed_image(FrameRef(clip.clip_id, i))
        assert abs(vec.norm() - 1.0) <= 1e-6
        assert float(np.dot(vec.values, vec.values)) == pytest.approx(1.0, abs=1e-9)


def test_category_prompts_pairwise_distinct():
    vectors = [trigram_embedding(category_prompt(label)) for label in CATEGORY_LABELS]
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            assert not np.array_equal(vectors[i].values, vectors[j].values)


def test_empty_text_rejected(reference_client):
    client, _ = reference_client
    with pytest.raises(EmptyInput):
        client.embed_text("")


def test_aesthetic_range_and_determinism(reference_client):
    client, clip = reference_client
    scores = [client.aesthetic_score(FrameRef(clip.clip_id, i)) for i in range(10)]
    assert all(0.0 <= s <= 10.0 for s in scores)
    assert scores == [client.aesthetic_score(FrameRef(clip.clip_id, i)) for i in range(10)]


def test_ocr_sidecar_is_the_oracle(reference_client):
    client, clip = reference_client
    assert client.ocr_region_count(FrameRef(clip.clip_id, 3)) == 4
    assert client.ocr_region_count(FrameRef(clip.clip_id, 4)) == 0


def test_flow_zero_on_identical_frames(reference_client):
    client, clip = reference_client
    flow = client.flow_magnitude(FrameRef(clip.clip_id, 1), FrameRef(clip.clip_id, 2))
    assert flow == pytest.approx(0.0, abs=1e-9)


def test_flow_detects_synthetic_shift():
    rng = np.random.default_rng(0)
    base = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    shifted = np.roll(base, 2, axis=1)
    assert block_matching_flow(base, shifted) == pytest.approx(2.0, abs=0.5)


def test_flow_rescales_to_source_pixels():
    rng = np.random.default_rng(1)
    virtual = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    big = np.kron(virtual, np.ones((2, 2, 1), dtype=np.uint8))
    shifted = np.roll(big, 4, axis=1)  # 4 source px = 2 grid px
    assert block_matching_flow(big, shifted) == pytest.approx(4.0, abs=1.0)


def test_flow_rejects_cross_clip_frames(reference_client):
    client, clip = reference_client
    other = FrameRef("not-a-real-clip", 0)
    with pytest.raises(ValueError):
        client.flow_magnitude(FrameRef(clip.clip_id, 0), other)
    with pytest.raises(ValueError):
        client.flow_magnitude(FrameRef(clip.clip_id, 5), FrameRef(clip.clip_id, 1))


def test_frame_bounds_enforced(reference_client):
    client, clip = reference_client
    with pytest.raises(ValueError):
        client.embed_image(FrameRef(clip.clip_id, 20))  # end is exclusive


def test_parse_yes_no():
    assert parse_yes_no("Yes\nNo\nNo", 3) == ["yes", "no", "no"]
    assert parse_yes_no("maybe", 1) == ["undetermined"]
    assert parse_yes_no("Yes, Yes, Yes", 3) == ["yes", "yes", "yes"]
    assert parse_yes_no("No.", 1) == ["no"]
    assert parse_yes_no("Yes", 3) == ["yes", "undetermined", "undetermined"]


def test_reference_chat_matches_heuristics(reference_client):
    from cfc import caption_curation as cc

    client, _ = reference_client
    caption = "A beach at sunset. The scene changes to a city street."
    answers = client.llm_yes_no(cc.TRIAGE_QUESTIONS, caption)
    tokenized = cc.tokenize(caption)
    assert answers == [
        "yes" if cc.detect_scene_transition(tokenized) else "no",
        "yes" if cc.detect_frame_level(tokenized) else "no",
        "yes" if cc.detect_reduplication(tokenized) else "no",
    ]
    assert answers[0] == "yes"


# ---------------------------------------------------------------------------
# HTTP client against a local stub backend


class _StubHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_POST(self):
        cfg = self.server.cfg  # type: ignore[attr-defined]
        with cfg["lock"]:
            cfg["requests"].append(self.path)
            cfg["concurrent"] += 1
            cfg["max_concurrent"] = max(cfg["max_concurrent"], cfg["concurrent"])
        try:
            if cfg["delay"]:
                time.sleep(cfg["delay"])
            fail_times = cfg["fail_times"]
            if fail_times > 0:
                cfg["fail_times"] = fail_times - 1
                self.send_response(503)
                self.end_headers()
                return
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length).decode("utf-8"))
            payload = cfg["respond"](self.path, body)
            data = json.dumps(payload).encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
        finally:
            with cfg["lock"]:
                cfg["concurrent"] -= 1


@pytest.fixture()
def stub_server():
    def default_respond(path, body):
        if path.endswith("embed_text"):
            n = len(body["texts"])
        elif path.endswith("flow"):
            return {"magnitudes": [1.5] * len(body["pairs"]), "model_id": "stub", "dim": 8}
        elif path.endswith("chat"):
            return {"text": "Yes\nNo\nNo", "model_id": "stub"}
        elif path.endswith("aesthetic"):
            return {"scores": [6.5] * len(body["frames"]), "model_id": "stub"}
        elif path.endswith("ocr_count"):
            return {"counts": [0] * len(body["frames"]), "model_id": "stub"}
        else:
            n = len(body["frames"])
        vec = [0.0] * 8
        vec[0] = 1.0
        return {"vectors": [vec] * n, "model_id": "stub", "dim": 8}

    cfg = {
        "fail_times": 0,
        "delay": 0.0,
        "respond": default_respond,
        "requests": [],
        "concurrent": 0,
        "max_concurrent": 0,
        "lock": threading.Lock(),
    }
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    server.cfg = cfg  # type: ignore[attr-defined]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}", cfg
    server.shutdown()


def _http_client(url: str, dim: int = 8, **endpoint_kwargs) -> HttpProviderClient:
    endpoints = {
        kind: ProviderEndpoint(base_url=url, **endpoint_kwargs)
        for kind in ("embed_image", "embed_text", "aesthetic", "ocr_count", "flow", "chat")
    }
    clip = _clip("vid", 0, 100)
    return HttpProviderClient(endpoints, resolver=FrameResolver([clip]), dim=dim, env={})


def test_http_round_trip(stub_server):
    url, cfg = stub_server
    client = _http_client(url)
    clip_id = make_clip_id("vid", 0, 100)
    vec = client.embed_image(FrameRef(clip_id, 3))
    assert vec.dim == 8 and vec.values[0] == 1.0
    assert client.aesthetic_score(FrameRef(clip_id, 3)) == 6.5
    assert client.ocr_region_count(FrameRef(clip_id, 3)) == 0
    assert client.flow_magnitude(FrameRef(clip_id, 0), FrameRef(clip_id, 9)) == 1.5
    assert client.llm_yes_no(["q1", "q2", "q3"], "caption") == ["yes", "no", "no"]


def test_http_requests_carry_resolved_source_uri(stub_server):
    url, cfg = stub_server
    seen = {}

    def capture(path, body):
        seen.update(body)
        return {"vectors": [[1.0] + [0.0] * 7], "model_id": "stub", "dim": 8}

    cfg["respond"] = capture
    client = _http_client(url)
    clip_id = make_clip_id("vid", 0, 100)
    client.embed_image(FrameRef(clip_id, 3))
    assert seen["frames"][0]["source_uri"] == "vid"
    assert seen["frames"][0]["frame_index"] == 3
    assert seen["frames"][0]["clip_id"] == clip_id


def test_http_retries_then_succeeds(stub_server):
    url, cfg = stub_server
    cfg["fail_times"] = 2
    client = _http_client(url, retry_budget=2)
    vec = client.embed_text("hello")
    assert vec.values[0] == 1.0
    assert len(cfg["requests"]) == 3  # initial try + two retries


def test_http_unavailable_after_budget(stub_server):
    url, cfg = stub_server
    cfg["fail_times"] = 10
    client = _http_client(url, retry_budget=2)
    with pytest.raises(ProviderUnavailable):
        client.embed_text("hello")
    assert len(cfg["requests"]) == 3


def test_http_unreachable_endpoint():
    client = _http_client("http://127.0.0.1:9", retry_budget=1, timeout_ms=200)
    with pytest.raises(ProviderUnavailable):
        client.aesthetic_score(FrameRef(make_clip_id("vid", 0, 100), 0))


def test_http_dimension_mismatch_is_protocol_violation(stub_server):
    url, cfg = stub_server

    def bad_dim(path, body):
        return {"vectors": [[1.0] * 7 for _ in body["frames"]], "model_id": "stub", "dim": 7}

    cfg["respond"] = bad_dim
    client = _http_client(url)
    with pytest.raises(ProtocolViolation):
        client.embed_image(FrameRef(make_clip_id("vid", 0, 100), 0))


def test_http_nan_score_is_protocol_violation(stub_server):
    url, cfg = stub_server

    def nan_score(path, body):
        return {"scores": [math.nan] * len(body["frames"]), "model_id": "stub"}

    cfg["respond"] = nan_score
    client = _http_client(url)
    with pytest.raises(ProtocolViolation):
        client.aesthetic_score(FrameRef(make_clip_id("vid", 0, 100), 0))


def test_http_negative_ocr_is_protocol_violation(stub_server):
    url, cfg = stub_server

    def negative(path, body):
        return {"counts": [-2] * len(body["frames"]), "model_id": "stub"}

    cfg["respond"] = negative
    client = _http_client(url)
    with pytest.raises(ProtocolViolation):
        client.ocr_region_count(FrameRef(make_clip_id("vid", 0, 100), 0))


def test_http_batches_cap_at_64(stub_server):
    url, cfg = stub_server
    client = _http_client(url)
    vectors = client.embed_texts([f"text {i}" for i in range(130)])
    assert len(vectors) == 130
    assert len(cfg["requests"]) == 3  # 64 + 64 + 2


def test_http_in_flight_never_exceeds_limit(stub_server):
    url, cfg = stub_server
    cfg["delay"] = 0.05
    client = _http_client(url, max_in_flight=3)
    with ThreadPoolExecutor(max_workers=16) as pool:
        list(pool.map(lambda i: client.embed_text(f"t{i}"), range(24)))
    assert cfg["max_concurrent"] <= 3
    assert client.gauge("embed_text").max_observed <= 3


def test_env_var_overrides_endpoint(stub_server):
    url, cfg = stub_server
    endpoints = {"embed_text": ProviderEndpoint(base_url="http://127.0.0.1:9")}
    client = HttpProviderClient(
        endpoints, dim=8, env={"CFC_PROVIDER_URL_EMBED_TEXT": url}
    )
    assert client.embed_text("hello").values[0] == 1.0


def test_question_count_bounds(reference_client):
    client, _ = reference_client
    with pytest.raises(ValueError):
        client.llm_yes_no([], "caption")
    with pytest.raises(ValueError):
        client.llm_yes_no(["q"] * 9, "caption")
