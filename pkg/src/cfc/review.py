"""HTTP review service for the human final-selection pass.

Serves the queue of undecided clips (highest aesthetic first), accepts
approve/reject decisions into an append-only JSONL log (replayed on startup,
last write wins), and serves the static review UI plus clip thumbnails.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Sequence
from urllib.parse import parse_qs, urlparse

from .catalog import ClipRecord
from .pipeline import load_decisions

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
}

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>clip review</title></head>
<body><h1>clip review service</h1>
<p>No UI bundle is installed. The JSON API is live:</p>
<ul>
<li>GET /api/queue?limit=N</li>
<li>POST /api/decision {"clip_id": "...", "decision": "approved"|"rejected", "reviewer": "..."}</li>
<li>GET /api/stats</li>
</ul></body></html>
"""


class ReviewService:
    """Queue + decision-log state shared by all request handler threads."""

    def __init__(
        self,
        records: Sequence[ClipRecord],
        decision_log: str | Path,
        thumbnails_dir: str | Path | None = None,
        static_dir: str | Path | None = None,
    ):
        self._records = {r.clip_id: r for r in records}
        self._log_path = Path(decision_log)
        self._decisions = load_decisions(self._log_path)
        self._write_lock = threading.Lock()
        self.thumbnails_dir = Path(thumbnails_dir) if thumbnails_dir else None
        self.static_dir = Path(static_dir) if static_dir else None

    def _thumbnail_uri(self, clip_id: str) -> str | None:
        if self.thumbnails_dir and (self.thumbnails_dir / f"{clip_id}.png").is_file():
            return f"/thumbs/{clip_id}.png"
        return None

    def _item(self, record: ClipRecord) -> dict[str, Any]:
        scores = record.scores.to_dict() if record.scores else {}
        return {
            "clip_id": record.clip_id,
            "thumbnail_uri": self._thumbnail_uri(record.clip_id),
            "duration_seconds": record.duration_seconds,
            "scores": scores,
            "category": record.category.value if record.category else None,
            "caption": record.caption.text if record.caption else None,
            "triage": record.caption.triage.to_dict()
            if record.caption and record.caption.triage
            else None,
        }

    def queue(self, limit: int | None = None) -> list[dict[str, Any]]:
        """Undecided clips, best aesthetic first (ties by clip_id)."""
        pending = [r for r in self._records.values() if r.clip_id not in self._decisions]
        pending.sort(key=lambda r: (-(r.scores.s_quality if r.scores else 0.0), r.clip_id))
        if limit is not None:
            pending = pending[:limit]
        return [self._item(r) for r in pending]

    def decide(self, clip_id: str, decision: str, reviewer: str) -> dict[str, Any]:
        if decision not in ("approved", "rejected"):
            raise ValueError(f"decision must be approved or rejected, got {decision!r}")
        if clip_id not in self._records:
            raise KeyError(clip_id)
        entry = {
            "clip_id": clip_id,
            "decision": decision,
            "reviewer": reviewer,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
        with self._write_lock:
            with open(self._log_path, "a", encoding="utf-8", newline="\n") as handle:
                handle.write(json.dumps(entry, ensure_ascii=False))
                handle.write("\n")
            self._decisions[clip_id] = decision
        return entry

    def stats(self) -> dict[str, int]:
        decided = {cid: d for cid, d in self._decisions.items() if cid in self._records}
        approved = sum(1 for d in decided.values() if d == "approved")
        rejected = sum(1 for d in decided.values() if d == "rejected")
        return {
            "pending": len(self._records) - len(decided),
            "approved": approved,
            "rejected": rejected,
        }

    def decisions(self) -> dict[str, str]:
        return dict(self._decisions)


class _ReviewHandler(BaseHTTPRequestHandler):
    server_version = "cfc-review/1"

    @property
    def service(self) -> ReviewService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt: str, *args: Any) -> None:  # quiet by default
        pass

    def _send_json(self, payload: Any, status: int = 200) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_file(self, path: Path) -> None:
        data = path.read_bytes()
        self.send_response(200)
        content_type = _CONTENT_TYPES.get(path.suffix, "application/octet-stream")
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:
        url = urlparse(self.path)
        if url.path == "/api/queue":
            params = parse_qs(url.query)
            limit = None
            if "limit" in params:
                try:
                    limit = max(0, int(params["limit"][0]))
                except ValueError:
                    self._send_json({"error": "limit must be an integer"}, 400)
                    return
            self._send_json(self.service.queue(limit))
            return
        if url.path == "/api/stats":
            self._send_json(self.service.stats())
            return
        if url.path.startswith("/thumbs/"):
            name = Path(url.path).name
            if self.service.thumbnails_dir:
                target = self.service.thumbnails_dir / name
                if target.is_file():
                    self._send_file(target)
                    return
            self._send_json({"error": "not found"}, 404)
            return
        # static UI
        static_dir = self.service.static_dir
        if static_dir and static_dir.is_dir():
            rel = url.path.lstrip("/") or "index.html"
            target = (static_dir / rel).resolve()
            if target.is_file() and static_dir.resolve() in target.parents:
                self._send_file(target)
                return
            if url.path == "/":
                index = static_dir / "index.html"
                if index.is_file():
                    self._send_file(index)
                    return
        if url.path == "/":
            body = _FALLBACK_PAGE.encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        self._send_json({"error": "not found"}, 404)

    def do_POST(self) -> None:
        url = urlparse(self.path)
        if url.path != "/api/decision":
            self._send_json({"error": "not found"}, 404)
            return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            body = json.loads(self.rfile.read(length).decode("utf-8"))
            entry = self.service.decide(
                clip_id=body["clip_id"],
                decision=body["decision"],
                reviewer=body.get("reviewer", "anonymous"),
            )
        except KeyError as exc:
            self._send_json({"error": f"unknown clip_id {exc}"}, 404)
            return
        except (ValueError, json.JSONDecodeError) as exc:
            self._send_json({"error": str(exc)}, 400)
            return
        self._send_json({"ok": True, **entry})


def make_server(service: ReviewService, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind the review service; raises OSError when the port is busy."""
    server = ThreadingHTTPServer((host, port), _ReviewHandler)
    server.service = service  # type: ignore[attr-defined]
    return server


def serve_review(
    records: Sequence[ClipRecord],
    decision_log: str | Path,
    port: int,
    *,
    host: str = "127.0.0.1",
    thumbnails_dir: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    service = ReviewService(
        records, decision_log, thumbnails_dir=thumbnails_dir, static_dir=static_dir
    )
    return make_server(service, port, host=host)
