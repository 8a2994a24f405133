"""Local JSON-over-HTTP service exposing mutation sessions.

Stateless analytical core plus an in-memory session store.  Mutations on
one session are serialized by a per-session lock; analytical reads work
on immutable seed snapshots.  No persistence by design.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from . import reports
from .automorphism import build_inverse_automorphism
from .errors import DomainError
from .mutation import Seed, initial_seed, op_mutation_equivalent, seed_mutate
from .quiver import Quiver
from .sigma import extend_sigma, find_slice_anti_iso, verify_sigma
from .translation import Slice, find_op_slice, zq_window
from .embedding import embed_zq


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class Session:
    id: str
    seeds: list[Seed]
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> Seed:
        return self.seeds[-1]


class SessionStore:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, quiver: Quiver) -> Session:
        sid = uuid.uuid4().hex[:12]
        session = Session(id=sid, seeds=[initial_seed(quiver)])
        with self._lock:
            self._sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {sid!r}")
        return session


def _zero_slice(q: Quiver) -> Slice:
    return Slice.from_vertices(q, [(0, v) for v in q.vertices])


def session_state_doc(session: Session) -> dict:
    return {"id": session.id, **reports.seed_doc(session.current)}


class Api:
    """HTTP-agnostic request handlers, shared with tests."""

    def __init__(self) -> None:
        self.store = SessionStore()

    def create_session(self, body: dict) -> dict:
        if "quiver" not in body:
            raise ApiError(422, "missing_quiver", "body must carry a quiver document")
        try:
            q = Quiver.from_doc(body["quiver"])
            q.check_mutable()
        except DomainError as e:
            raise ApiError(422, "bad_quiver", str(e))
        session = self.store.create(q)
        return {"id": session.id}

    def get_state(self, sid: str) -> dict:
        return session_state_doc(self.store.get(sid))

    def mutate(self, sid: str, body: dict) -> dict:
        session = self.store.get(sid)
        vertex = str(body.get("vertex", ""))
        with session.lock:
            if vertex not in session.current.quiver.vertices:
                raise ApiError(422, "unknown_vertex", f"no vertex {vertex!r}")
            session.seeds.append(seed_mutate(session.current, vertex))
            return session_state_doc(session)

    def undo(self, sid: str) -> dict:
        session = self.store.get(sid)
        with session.lock:
            if len(session.seeds) > 1:
                session.seeds.pop()
            return session_state_doc(session)

    def op_equivalence(self, sid: str, depth: int) -> dict:
        seed = self.store.get(sid).current
        return reports.op_equivalence_doc(op_mutation_equivalent(seed.quiver, depth))

    def zq(self, sid: str, lo: int, hi: int) -> dict:
        seed = self.store.get(sid).current
        try:
            return reports.window_doc(zq_window(seed.quiver, lo, hi))
        except DomainError as e:
            raise ApiError(422, "bad_window", str(e))

    def embedding(self, sid: str) -> dict:
        seed = self.store.get(sid).current
        q = seed.quiver
        try:
            op = find_op_slice(q)
            if op is None:
                raise ApiError(404, "no_op_slice", "no opposite slice found")
            window = (-(op.indexing.k + 2), 1)
            emb = embed_zq(q, op.slice, op.indexing, window)
            return reports.embedding_doc(emb, _zero_slice(q), op.slice)
        except DomainError as e:
            raise ApiError(422, "embedding_failed", str(e))

    def sigma(self, sid: str) -> dict:
        seed = self.store.get(sid).current
        q = seed.quiver
        try:
            op = find_op_slice(q)
        except DomainError as e:
            raise ApiError(422, "bad_quiver", str(e))
        if op is None:
            raise ApiError(404, "no_op_slice", "no opposite slice found")
        search = find_slice_anti_iso(q, op.slice, op.indexing)
        if search.result is None:
            raise ApiError(404, "no_anti_iso", "no slice anti-isomorphism found")
        sg = extend_sigma(search.result)
        k = op.indexing.k
        return reports.sigma_doc(sg, verify_sigma(sg, (-(k + 3), k + 2)))

    def inverse_automorphism(self, sid: str, involutive: bool, depth: int) -> dict:
        seed = self.store.get(sid).current
        r = build_inverse_automorphism(
            seed.quiver, depth, require_involutive=involutive
        )
        return reports.inverse_auto_doc(r.witness, r.complete, seed.quiver)


_MIME = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
}


def make_handler(api: Api, ui_dir: Optional[Path]):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # keep the test output quiet
            pass

        def _send(self, status: int, payload: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()
            self.wfile.write(payload)

        def _send_json(self, status: int, doc) -> None:
            self._send(status, reports.to_json_bytes(doc), "application/json")

        def _send_error(self, e: ApiError) -> None:
            self._send_json(e.status, {"error": {"code": e.code, "message": e.message}})

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length).decode("utf-8"))
            except json.JSONDecodeError:
                raise ApiError(400, "bad_json", "request body is not valid JSON")

        def do_OPTIONS(self) -> None:
            self._send(204, b"", "text/plain")

        def do_POST(self) -> None:
            try:
                parts = urlparse(self.path).path.strip("/").split("/")
                if parts[:2] == ["api", "sessions"]:
                    if len(parts) == 2:
                        self._send_json(200, api.create_session(self._body()))
                        return
                    if len(parts) == 4 and parts[3] == "mutate":
                        self._send_json(200, api.mutate(parts[2], self._body()))
                        return
                    if len(parts) == 4 and parts[3] == "undo":
                        self._send_json(200, api.undo(parts[2]))
                        return
                raise ApiError(404, "not_found", f"no POST route {self.path!r}")
            except ApiError as e:
                self._send_error(e)
            except DomainError as e:
                self._send_error(ApiError(422, "domain_error", str(e)))

        def do_GET(self) -> None:
            try:
                url = urlparse(self.path)
                parts = url.path.strip("/").split("/")
                qs = parse_qs(url.query)

                def qint(name: str, default: int) -> int:
                    try:
                        return int(qs.get(name, [default])[0])
                    except ValueError:
                        raise ApiError(400, "bad_parameter", f"{name} must be an integer")

                if parts[:2] == ["api", "sessions"] and len(parts) >= 3:
                    sid = parts[2]
                    if len(parts) == 3:
                        self._send_json(200, api.get_state(sid))
                        return
                    tail = parts[3]
                    if tail == "op-equivalence":
                        self._send_json(200, api.op_equivalence(sid, qint("depth", 6)))
                        return
                    if tail == "zq":
                        self._send_json(
                            200, api.zq(sid, qint("lo", -2), qint("hi", 1))
                        )
                        return
                    if tail == "embedding":
                        self._send_json(200, api.embedding(sid))
                        return
                    if tail == "sigma":
                        self._send_json(200, api.sigma(sid))
                        return
                    if tail == "inverse-automorphism":
                        involutive = qs.get("involutive", ["true"])[0] != "false"
                        self._send_json(
                            200,
                            api.inverse_automorphism(sid, involutive, qint("depth", 8)),
                        )
                        return
                    raise ApiError(404, "not_found", f"no GET route {self.path!r}")
                if ui_dir is not None:
                    self._serve_static(url.path)
                    return
                raise ApiError(404, "not_found", f"no GET route {self.path!r}")
            except ApiError as e:
                self._send_error(e)
            except DomainError as e:
                self._send_error(ApiError(422, "domain_error", str(e)))

        def _serve_static(self, path: str) -> None:
            rel = path.lstrip("/") or "index.html"
            target = (ui_dir / rel).resolve()
            if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
                raise ApiError(404, "not_found", f"no file {rel!r}")
            payload = target.read_bytes()
            self._send(200, payload, _MIME.get(target.suffix, "application/octet-stream"))

    return Handler


def serve(port: int, ui_dir: Optional[str] = None) -> ThreadingHTTPServer:
    """Start the service; returns the server (caller runs serve_forever)."""
    api = Api()
    handler = make_handler(api, Path(ui_dir) if ui_dir else None)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
