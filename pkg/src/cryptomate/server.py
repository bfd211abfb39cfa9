"""Language server over stdio: JSON-RPC 2.0 with Content-Length framing.

Supported methods: initialize/initialized/shutdown/exit, textDocument
didOpen/didChange/didSave (full-text sync), textDocument/codeAction and
workspace/executeCommand ("cryptomate.feedback"). Edits re-run the pipeline
after a 300 ms debounce; a newer edit of the same document resets the timer,
so the latest text always wins. Rapid edit bursts flip a document into quiet
mode, which downgrades every published severity to Hint without changing the
diagnostic count; a save or three idle seconds restores normal mode. Mode
flips are announced with the custom notification `cryptomate/quietMode`.

Messages are handled in arrival order on a single consumer; analyses run
inline between messages once their debounce deadline passes, which keeps at
most one analysis in flight per document and publishes in order.
"""

from __future__ import annotations

import json
import logging
import os
import queue
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO
from urllib.parse import unquote, urlparse
from urllib.request import url2pathname

from . import __version__
from .feedback import (
    DEFAULT_STORE_PATH,
    FeedbackStore,
    load_store_with_recovery,
    record_verdict,
    save_store,
)
from .notify import Notification, prioritize
from .pipeline import AnalysisSession, finding_json
from .rules import RuleFormatError, RuleSet, bundled_rules_dir, load_rules
from .scheduler import AnalysisConfig
from .syntax.lexer import LexError

log = logging.getLogger("cryptomate.server")

DEBOUNCE_S = 0.3
QUIET_WINDOW_S = 1.5
QUIET_EDIT_THRESHOLD = 3
QUIET_RESTORE_S = 3.0
EDIT_RING_SIZE = 8

SEVERITY_CODE = {"error": 1, "warning": 2, "info": 3, "hint": 4}
TAG_UNNECESSARY = 1

ERR_PARSE = -32700
ERR_METHOD_NOT_FOUND = -32601
ERR_INVALID_PARAMS = -32602
ERR_SERVER_NOT_INITIALIZED = -32002

FEEDBACK_COMMAND = "cryptomate.feedback"


class FramingError(Exception):
    pass


def frame_message(payload: bytes) -> bytes:
    """Wire form: Content-Length header, blank line, raw payload bytes."""
    return b"Content-Length: " + str(len(payload)).encode("ascii") + b"\r\n\r\n" + payload


def read_frame(stream: BinaryIO) -> bytes | None:
    """Read one framed message; None on clean EOF at a message boundary.

    Unknown headers are tolerated; a missing Content-Length or a short read
    is a FramingError.
    """
    header_blob = b""
    while not header_blob.endswith(b"\r\n\r\n"):
        byte = stream.read(1)
        if not byte:
            if not header_blob:
                return None
            raise FramingError("connection closed inside a header block")
        header_blob += byte

    content_length: int | None = None
    for line in header_blob[:-4].split(b"\r\n"):
        if not line:
            continue
        name, _, value = line.partition(b":")
        if name.strip().lower() == b"content-length":
            try:
                content_length = int(value.strip())
            except ValueError as exc:
                raise FramingError(f"bad Content-Length {value!r}") from exc
    if content_length is None:
        raise FramingError("missing Content-Length header")

    payload = b""
    while len(payload) < content_length:
        chunk = stream.read(content_length - len(payload))
        if not chunk:
            raise FramingError(
                f"short read: expected {content_length} bytes, got {len(payload)}"
            )
        payload += chunk
    return payload


def _encode(message: dict) -> bytes:
    return json.dumps(
        message, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def uri_to_path(uri: str) -> str:
    parsed = urlparse(uri)
    if parsed.scheme == "file":
        return url2pathname(unquote(parsed.path))
    return uri


@dataclass
class _QuietState:
    edits: deque = field(default_factory=lambda: deque(maxlen=EDIT_RING_SIZE))
    mode: str = "normal"  # normal | quiet
    restore_deadline: float | None = None


@dataclass
class _Document:
    text: str
    version: int


_EOF = object()


class Server:
    def __init__(
        self,
        stdin: BinaryIO,
        stdout: BinaryIO,
        *,
        rules_dir: str | None = None,
        feedback_store: str | None = None,
        budget_ms: int = 500,
        min_confidence: float = 0.50,
        clock=time.monotonic,
    ):
        self._in = stdin
        self._out = stdout
        self._clock = clock
        self._defaults = {
            "rules_dir": rules_dir,
            "feedback_store": feedback_store or DEFAULT_STORE_PATH,
            "budget_ms": budget_ms,
            "min_confidence": min_confidence,
        }
        self._queue: queue.Queue = queue.Queue()
        self._running = True
        self._initialized = False
        self._shutdown_requested = False
        self._clean_exit = False
        self._root_path: Path | None = None
        self._session: AnalysisSession | None = None
        self._store_path: str = self._defaults["feedback_store"]
        self._docs: dict[str, _Document] = {}
        self._pending: dict[str, float] = {}  # uri -> analysis deadline
        self._quiet: dict[str, _QuietState] = {}
        self._published: dict[str, list[Notification]] = {}

    # -- transport ----------------------------------------------------------

    def _send(self, message: dict) -> None:
        self._out.write(frame_message(_encode(message)))
        self._out.flush()

    def _respond(self, msg_id, result) -> None:
        self._send({"jsonrpc": "2.0", "id": msg_id, "result": result})

    def _respond_error(self, msg_id, code: int, message: str) -> None:
        self._send(
            {"jsonrpc": "2.0", "id": msg_id, "error": {"code": code, "message": message}}
        )

    def _notify(self, method: str, params: dict) -> None:
        self._send({"jsonrpc": "2.0", "method": method, "params": params})

    def _log_message(self, text: str, *, level: int = 1) -> None:
        self._notify("window/logMessage", {"type": level, "message": text})

    def _show_message(self, text: str, *, level: int = 2) -> None:
        self._notify("window/showMessage", {"type": level, "message": text})

    # -- main loop ------------------------------------------------------------

    def _read_loop(self) -> None:
        try:
            while True:
                payload = read_frame(self._in)
                if payload is None:
                    break
                self._queue.put(payload)
        except FramingError as exc:
            self._queue.put(exc)
        except (OSError, ValueError):
            pass
        self._queue.put(_EOF)

    def serve(self) -> int:
        reader = threading.Thread(target=self._read_loop, daemon=True)
        reader.start()
        while self._running:
            timeout = self._timeout_until_next_deadline()
            try:
                item = self._queue.get(timeout=timeout)
            except queue.Empty:
                self._fire_due()
                continue
            if item is _EOF:
                break
            if isinstance(item, FramingError):
                log.error("framing error, terminating connection: %s", item)
                break
            self.handle_payload(item)
            self._fire_due()
        return 0 if self._clean_exit or self._shutdown_requested else 1

    def _timeout_until_next_deadline(self) -> float | None:
        deadlines = list(self._pending.values())
        deadlines.extend(
            s.restore_deadline
            for s in self._quiet.values()
            if s.restore_deadline is not None
        )
        if not deadlines:
            return None
        return max(0.0, min(deadlines) - self._clock())

    def _fire_due(self) -> None:
        now = self._clock()
        for uri, deadline in sorted(self._pending.items()):
            if now >= deadline:
                del self._pending[uri]
                self._analyze_and_publish(uri)
        for uri, state in sorted(self._quiet.items()):
            if (
                state.mode == "quiet"
                and state.restore_deadline is not None
                and now >= state.restore_deadline
            ):
                self._set_mode(uri, "normal")
                self._publish_cached(uri)

    # -- dispatch ----------------------------------------------------------------

    def handle_payload(self, payload: bytes) -> None:
        try:
            message = json.loads(payload.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._respond_error(None, ERR_PARSE, f"parse error: {exc}")
            return
        if not isinstance(message, dict):
            self._respond_error(None, ERR_PARSE, "payload is not an object")
            return
        self.handle_message(message)

    def handle_message(self, message: dict) -> None:
        method = message.get("method")
        msg_id = message.get("id")
        params = message.get("params") or {}
        is_request = msg_id is not None

        if method is None:
            return  # a response to a server-initiated request; none are sent

        if not self._initialized and method not in ("initialize", "exit"):
            if is_request:
                self._respond_error(
                    msg_id, ERR_SERVER_NOT_INITIALIZED, "server not initialized"
                )
            return

        handler = {
            "initialize": self._on_initialize,
            "initialized": lambda p: None,
            "shutdown": self._on_shutdown,
            "exit": self._on_exit,
            "textDocument/didOpen": self._on_did_open,
            "textDocument/didChange": self._on_did_change,
            "textDocument/didSave": self._on_did_save,
            "textDocument/codeAction": self._on_code_action,
            "workspace/executeCommand": self._on_execute_command,
        }.get(method)

        if handler is None:
            if is_request:
                self._respond_error(
                    msg_id, ERR_METHOD_NOT_FOUND, f"method not found: {method}"
                )
            elif not method.startswith("$/"):
                log.debug("ignoring notification %s", method)
            return

        try:
            result = handler(params)
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            if is_request:
                self._respond_error(msg_id, ERR_INVALID_PARAMS, f"invalid params: {exc}")
            return
        if is_request:
            self._respond(msg_id, result)

    # -- lifecycle ------------------------------------------------------------------

    def _on_initialize(self, params: dict):
        options = dict(self._defaults)
        for key, value in (params.get("initializationOptions") or {}).items():
            if key in options and value is not None:
                options[key] = value

        root_uri = params.get("rootUri")
        if root_uri:
            self._root_path = Path(uri_to_path(root_uri))
        elif params.get("rootPath"):
            self._root_path = Path(params["rootPath"])

        rules_dir = options["rules_dir"] or bundled_rules_dir()
        try:
            rule_set: RuleSet = load_rules(rules_dir)
        except RuleFormatError as exc:
            rule_set = RuleSet()
            rule_set.errors.append(exc)
        self._store_path = str(options["feedback_store"])
        store, warning = load_store_with_recovery(self._store_path)
        config = AnalysisConfig(
            budget_ms=int(options["budget_ms"]),
            min_confidence=float(options["min_confidence"]),
        )
        self._session = AnalysisSession(rule_set, config, store)
        self._initialized = True

        if warning:
            self._log_message(f"feedback store: {warning}", level=2)
        for err in rule_set.errors:
            self._log_message(f"rule error: {err}", level=2)

        return {
            "capabilities": {
                "textDocumentSync": {"openClose": True, "change": 1, "save": True},
                "codeActionProvider": True,
                "executeCommandProvider": {"commands": [FEEDBACK_COMMAND]},
            },
            "serverInfo": {"name": "cryptomate", "version": __version__},
        }

    def _on_shutdown(self, params: dict):
        self._shutdown_requested = True
        return None

    def _on_exit(self, params: dict):
        self._clean_exit = self._shutdown_requested
        self._running = False
        return None

    # -- document sync ------------------------------------------------------------------

    def _on_did_open(self, params: dict) -> None:
        doc = params["textDocument"]
        uri = doc["uri"]
        self._docs[uri] = _Document(doc["text"], int(doc.get("version", 0)))
        self._quiet.setdefault(uri, _QuietState())
        self._schedule(uri)

    def _on_did_change(self, params: dict) -> None:
        uri = params["textDocument"]["uri"]
        version = int(params["textDocument"].get("version", 0))
        changes = params["contentChanges"]
        if not changes:
            return
        text = changes[-1]["text"]  # full-document sync
        known = self._docs.get(uri)
        if known is not None and version < known.version:
            return  # stale change, newer text already processed
        self._docs[uri] = _Document(text, version)
        self._track_edit(uri)
        self._schedule(uri)

    def _on_did_save(self, params: dict) -> None:
        uri = params["textDocument"]["uri"]
        state = self._quiet.setdefault(uri, _QuietState())
        state.edits.clear()
        state.restore_deadline = None
        if state.mode == "quiet":
            self._set_mode(uri, "normal")
            self._publish_cached(uri)
        if uri in self._docs:
            self._schedule(uri)

    def _schedule(self, uri: str) -> None:
        # a newer edit resets the deadline: latest edit wins
        self._pending[uri] = self._clock() + DEBOUNCE_S

    def _track_edit(self, uri: str) -> None:
        now = self._clock()
        state = self._quiet.setdefault(uri, _QuietState())
        state.edits.append(now)
        recent = sum(1 for t in state.edits if now - t <= QUIET_WINDOW_S)
        if recent >= QUIET_EDIT_THRESHOLD and state.mode == "normal":
            self._set_mode(uri, "quiet")
        if state.mode == "quiet":
            state.restore_deadline = now + QUIET_RESTORE_S

    def _set_mode(self, uri: str, mode: str) -> None:
        state = self._quiet.setdefault(uri, _QuietState())
        if state.mode == mode:
            return
        state.mode = mode
        if mode == "normal":
            state.restore_deadline = None
        self._notify("cryptomate/quietMode", {"uri": uri, "mode": mode})

    # -- analysis and publishing ----------------------------------------------------------

    def _rel_file(self, uri: str) -> str:
        path = Path(uri_to_path(uri))
        if self._root_path is not None:
            try:
                return path.relative_to(self._root_path).as_posix()
            except ValueError:
                pass
        return str(path)

    def _analyze_and_publish(self, uri: str) -> None:
        doc = self._docs.get(uri)
        if doc is None or self._session is None:
            return
        try:
            result = self._session.analyze(self._rel_file(uri), doc.text)
            notifications = result.notifications
            for diag in result.parse_diagnostics:
                self._log_message(f"{uri}: {diag.message}", level=3)
        except LexError as exc:
            self._log_message(f"analysis failed for {uri}: {exc}", level=1)
            notifications = []
        except Exception as exc:  # analysis must never kill the server
            self._log_message(f"analysis failed for {uri}: {exc}", level=1)
            notifications = []
        self._published[uri] = notifications
        self._publish(uri, notifications, doc.version)

    def _publish_cached(self, uri: str) -> None:
        doc = self._docs.get(uri)
        if doc is None or uri not in self._published:
            return
        self._publish(uri, self._published[uri], doc.version)

    def _publish(self, uri: str, notifications: list[Notification], version: int) -> None:
        quiet = self._quiet.get(uri, _QuietState()).mode == "quiet"
        diagnostics = [
            self._diagnostic(n, quiet) for n in _display_order(notifications)
        ]
        self._notify(
            "textDocument/publishDiagnostics",
            {"uri": uri, "version": version, "diagnostics": diagnostics},
        )

    def _diagnostic(self, n: Notification, quiet: bool) -> dict:
        f = n.finding
        if n.suppressed or quiet:
            severity = SEVERITY_CODE["hint"]
        else:
            severity = SEVERITY_CODE[n.severity]
        data = {
            "fingerprint": n.fingerprint,
            "rule_id": f.rule_id,
            "strategy": f.strategy,
            "certainty": f.certainty,
            "kind": f.kind,
            "suppressed": n.suppressed,
            "suppression_reason": n.suppression_reason,
            "finding": finding_json(n),
            "explanation": n.explanation,
            "noncompliant_example": n.noncompliant_example,
            "compliant_example": n.compliant_example,
            "quickfix": (
                {
                    "line": n.quickfix.line,
                    "col": n.quickfix.col,
                    "new_text": n.quickfix.new_text,
                }
                if n.quickfix
                else None
            ),
        }
        diagnostic = {
            "range": {
                "start": {
                    "line": f.span.start_line - 1,
                    "character": f.span.start_col - 1,
                },
                "end": {"line": f.span.end_line - 1, "character": f.span.end_col - 1},
            },
            "severity": severity,
            "source": "cryptomate",
            "message": n.title,
            "data": data,
        }
        if n.suppressed:
            diagnostic["tags"] = [TAG_UNNECESSARY]
        return diagnostic

    # -- code actions and feedback ------------------------------------------------------------

    def _on_code_action(self, params: dict):
        uri = params["textDocument"]["uri"]
        requested = params["range"]
        actions: list[dict] = []
        for diagnostic in params.get("context", {}).get("diagnostics", []):
            if not _ranges_overlap(requested, diagnostic.get("range", {})):
                continue
            data = diagnostic.get("data") or {}
            fingerprint = data.get("fingerprint")
            rule_id = data.get("rule_id")
            strategy = data.get("strategy")
            if not fingerprint or not rule_id:
                continue
            quickfix = data.get("quickfix")
            if quickfix:
                actions.append(
                    {
                        "title": f"Fix: {diagnostic.get('message', rule_id)}",
                        "kind": "quickfix",
                        "diagnostics": [diagnostic],
                        "edit": {
                            "changes": {
                                uri: [
                                    {
                                        "range": _point(
                                            quickfix["line"] - 1, quickfix["col"] - 1
                                        ),
                                        "newText": quickfix["new_text"],
                                    }
                                ]
                            }
                        },
                    }
                )
            suppress_edit = self._suppression_edit(uri, diagnostic, rule_id)
            if suppress_edit is not None:
                actions.append(
                    {
                        "title": "Suppress with annotation",
                        "kind": "quickfix",
                        "diagnostics": [diagnostic],
                        "edit": {"changes": {uri: [suppress_edit]}},
                    }
                )
            for title, verdict in (
                ("Mark as false positive", "fp"),
                ("Mark as true positive", "tp"),
            ):
                actions.append(
                    {
                        "title": title,
                        "diagnostics": [diagnostic],
                        "command": {
                            "title": title,
                            "command": FEEDBACK_COMMAND,
                            "arguments": [fingerprint, verdict, rule_id, strategy],
                        },
                    }
                )
        return actions

    def _suppression_edit(self, uri: str, diagnostic: dict, rule_id: str) -> dict | None:
        doc = self._docs.get(uri)
        if doc is None:
            return None
        line_index = diagnostic["range"]["start"]["line"]
        lines = doc.text.splitlines()
        if not 0 <= line_index < len(lines):
            return None
        end_char = len(lines[line_index])
        return {
            "range": _point(line_index, end_char),
            "newText": f" // cm:allow {rule_id}",
        }

    def _on_execute_command(self, params: dict):
        command = params["command"]
        if command != FEEDBACK_COMMAND:
            raise ValueError(f"unknown command {command!r}")
        fingerprint, verdict, rule_id, strategy = params["arguments"][:4]
        assert self._session is not None
        record_verdict(self._session.store, fingerprint, verdict, rule_id, strategy)
        try:
            save_store(self._session.store, self._store_path)
        except OSError as exc:
            self._show_message(f"could not save feedback store: {exc}", level=2)
        # feedback may flip learned suppression, so republishing means re-analysis
        for uri in sorted(self._docs):
            self._analyze_and_publish(uri)
            self._pending.pop(uri, None)
        return None


def _display_order(notifications: list[Notification]) -> list[Notification]:
    """Position order, but notifications sharing a range go most severe
    first so clients can show them sequentially by importance."""
    groups: dict[tuple, list[Notification]] = {}
    for n in notifications:
        span = n.finding.span
        key = (span.start_line, span.start_col, span.end_line, span.end_col)
        groups.setdefault(key, []).append(n)
    ordered: list[Notification] = []
    for key in sorted(groups):
        ordered.extend(prioritize(groups[key]))
    return ordered


def _point(line: int, character: int) -> dict:
    pos = {"line": line, "character": character}
    return {"start": pos, "end": dict(pos)}


def _ranges_overlap(a: dict, b: dict) -> bool:
    def key(pos: dict) -> tuple[int, int]:
        return pos.get("line", 0), pos.get("character", 0)

    a_start, a_end = key(a.get("start", {})), key(a.get("end", {}))
    b_start, b_end = key(b.get("start", {})), key(b.get("end", {}))
    return a_start <= b_end and b_start <= a_end


class _FdReader:
    """Unbuffered fd reader. The background reader thread must not hold a
    buffered stream's lock, or interpreter shutdown aborts while it blocks."""

    def __init__(self, fd: int):
        self._fd = fd

    def read(self, n: int) -> bytes:
        try:
            return os.read(self._fd, n)
        except OSError:
            return b""


def serve_stdio(
    *,
    rules_dir: str | None = None,
    feedback_store: str | None = None,
    budget_ms: int = 500,
    min_confidence: float = 0.50,
) -> int:
    import sys

    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    server = Server(
        _FdReader(sys.stdin.fileno()),
        sys.stdout.buffer,
        rules_dir=rules_dir,
        feedback_store=feedback_store,
        budget_ms=budget_ms,
        min_confidence=min_confidence,
    )
    return server.serve()
