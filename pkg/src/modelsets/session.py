"""Loopback session server for the interactive exploratory review.

The server exposes the scanned candidates with their plot data over a
tiny JSON protocol, collects keep/discard decisions (idempotent; a
different value overwrites while the session is open), and releases
the blocked caller when the reviewer finalizes.  It binds to the
loopback interface only and requires a session token on every request.

Routes:
  GET  /session                   -> session state
  GET  /candidates/<id>/plot      -> plot views for one candidate
  POST /decisions                 -> {"candidate_id": int, "keep": bool}
  POST /finalize                  -> freeze the session
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

__all__ = ["SessionState", "SessionServer", "SessionDecisionSource"]


@dataclass
class SessionState:
    """Mutable review state behind the protocol."""

    session_id: str
    bundles: list
    decisions: dict = field(default_factory=dict)
    finalized: bool = False

    @property
    def pending_count(self) -> int:
        return sum(1 for b in self.bundles
                   if b.candidate.key not in self.decisions)

    def candidate_by_id(self, cand_id: int):
        if 1 <= cand_id <= len(self.bundles):
            return self.bundles[cand_id - 1]
        return None

    def to_dict(self) -> dict:
        entries = []
        for i, b in enumerate(self.bundles, start=1):
            c = b.candidate
            keep = self.decisions.get(c.key)
            decision = "pending" if keep is None else ("keep" if keep else "discard")
            entries.append({
                "id": i,
                "key": c.key,
                "kind": c.kind,
                "label": c.label,
                "var_a": c.var_a,
                "var_b": c.var_b,
                "p_value": c.p_value,
                "test_statistic": c.test_statistic,
                "decision": decision,
            })
        return {
            "session_id": self.session_id,
            "finalized": self.finalized,
            "pending_count": self.pending_count,
            "candidates": entries,
        }


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "modelsets-session"

    # quiet: the CLI owns the terminal during a session
    def log_message(self, fmt, *args):
        pass

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers",
                         "Content-Type, X-Session-Token")

    def _reply(self, status: int, doc: dict):
        body = json.dumps(doc).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _reply_bytes(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _authorized(self) -> bool:
        token = self.headers.get("X-Session-Token")
        if token is None:
            query = parse_qs(urlparse(self.path).query)
            token = (query.get("token") or [None])[0]
        return token == self.server.token

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        path = urlparse(self.path).path
        served = self._maybe_serve_ui(path)
        if served:
            return
        if not self._authorized():
            self._reply(401, {"error": "BadToken"})
            return
        state = self.server.state
        if path == "/session":
            self._reply(200, state.to_dict())
            return
        parts = path.strip("/").split("/")
        if len(parts) == 3 and parts[0] == "candidates" and parts[2] == "plot":
            try:
                cand_id = int(parts[1])
            except ValueError:
                cand_id = -1
            bundle = state.candidate_by_id(cand_id)
            if bundle is None:
                self._reply(404, {"error": "UnknownCandidate"})
                return
            self._reply(200, {
                "candidate_id": cand_id,
                "views": [p.to_dict() for p in bundle.plots],
            })
            return
        self._reply(404, {"error": "NotFound"})

    def _maybe_serve_ui(self, path: str) -> bool:
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            return False
        if path in ("/session",) or path.startswith("/candidates"):
            return False
        rel = "index.html" if path in ("", "/") else path.lstrip("/")
        target = (ui_dir / rel).resolve()
        if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
            return False
        kind = "text/html"
        if target.suffix == ".js":
            kind = "text/javascript"
        elif target.suffix == ".css":
            kind = "text/css"
        self._reply_bytes(200, target.read_bytes(), kind)
        return True

    def do_POST(self):
        if not self._authorized():
            self._reply(401, {"error": "BadToken"})
            return
        state = self.server.state
        path = urlparse(self.path).path
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            body = json.loads(raw.decode() or "{}")
        except json.JSONDecodeError:
            self._reply(400, {"error": "BadRequest"})
            return

        if path == "/decisions":
            if state.finalized:
                self._reply(409, {"error": "AlreadyFinalized"})
                return
            try:
                cand_id = int(body.get("candidate_id", -1))
            except (TypeError, ValueError):
                cand_id = -1
            bundle = state.candidate_by_id(cand_id)
            if bundle is None:
                self._reply(404, {"error": "UnknownCandidate"})
                return
            keep = bool(body.get("keep"))
            # idempotent: same value is a no-op, a new value overwrites
            state.decisions[bundle.candidate.key] = keep
            self._reply(200, state.to_dict())
            return

        if path == "/finalize":
            if state.finalized:
                self._reply(409, {"error": "AlreadyFinalized"})
                return
            if state.pending_count:
                self._reply(409, {"error": "CandidatesPending",
                                  "pending_count": state.pending_count})
                return
            state.finalized = True
            self._reply(200, {"finalized": True,
                              "kept": sorted(k for k, v in state.decisions.items() if v)})
            return

        self._reply(404, {"error": "NotFound"})


class SessionServer:
    """Single-session HTTP server bound to 127.0.0.1."""

    def __init__(self, bundles, token: str | None = None, port: int = 0,
                 ui_dir=None):
        self.state = SessionState(session_id=secrets.token_hex(8),
                                  bundles=list(bundles))
        self.token = token or secrets.token_hex(16)
        self.httpd = HTTPServer(("127.0.0.1", port), _Handler)
        self.httpd.timeout = 0.2
        self.httpd.state = self.state
        self.httpd.token = self.token
        self.httpd.ui_dir = Path(ui_dir) if ui_dir else None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def serve_until_finalized(self, should_stop=None) -> dict:
        """Handle requests sequentially until the session finalizes.
        Returns the decision map."""
        try:
            while not self.state.finalized:
                if should_stop is not None and should_stop():
                    break
                self.httpd.handle_request()
        finally:
            self.httpd.server_close()
        return dict(self.state.decisions)

    def close(self):
        self.httpd.server_close()


class SessionDecisionSource:
    """Decision source that defers to a browser/API session.

    ``announce`` receives (url, token) once the server is listening;
    the default prints connection instructions.
    """

    def __init__(self, token: str | None = None, port: int = 0,
                 ui_dir=None, announce=None, should_stop=None):
        self.token = token
        self.port = port
        self.ui_dir = ui_dir
        self.announce = announce
        self.should_stop = should_stop

    def resolve(self, bundles):
        server = SessionServer(bundles, token=self.token, port=self.port,
                               ui_dir=self.ui_dir)
        if self.announce is not None:
            self.announce(server.url, server.token)
        else:
            print(f"review session listening on {server.url} "
                  f"(token {server.token})", flush=True)
        decisions = server.serve_until_finalized(self.should_stop)
        if not server.state.finalized:
            from .exceptions import DecisionSourceClosedError

            raise DecisionSourceClosedError(
                "session server stopped before finalize",
                partial_decisions=decisions,
            )
        return decisions
