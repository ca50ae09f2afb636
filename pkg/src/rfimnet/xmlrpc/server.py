"""Threaded HTTP server dispatching XML-RPC calls to registered handlers.

Calls are served on `/` and `/RPC2`; anything else is 404. Requests must
carry Content-Length (chunked bodies are refused with 411). Handler
dispatch translates exceptions into the fault conventions: parse errors
-32700, unknown method -32601, TypeError -32602 (argument mismatch),
anything else -32603; a Fault raised by a handler passes through as-is.
An optional static directory is served read-only under /ui/ and a config
flag answers permissive CORS headers for browser clients.
"""

from __future__ import annotations

import logging
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from .codec import DecodeError, EncodeError, decode_call, encode_response
from .values import Fault, MethodCall, MethodResponse

log = logging.getLogger(__name__)


class RpcServer:
    """XML-RPC endpoint over ThreadingHTTPServer.

    Usable as a context manager; `port=0` binds an ephemeral port, the
    bound value is available as `.port` / `.url`. Handlers registered
    with `register` receive decoded params positionally and return one
    encodable value or raise Fault.
    """

    def __init__(
        self,
        bind: str = "127.0.0.1",
        port: int = 8000,
        cors: bool = False,
        ui_dir: Optional[str] = None,
        record_requests: bool = False,
    ):
        self._handlers: Dict[str, Callable[..., Any]] = {}
        self.cors = cors
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.record_requests = record_requests
        self.requests: List[bytes] = []  # raw POST bodies, when recording
        self._lock = threading.Lock()
        self._httpd = ThreadingHTTPServer((bind, port), _RequestHandler)
        self._httpd.daemon_threads = True
        self._httpd.rpc_server = self  # type: ignore[attr-defined]
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        host = self._httpd.server_address[0]
        return f"http://{host}:{self.port}"

    def register(self, name: str, handler: Callable[..., Any]) -> None:
        self._handlers[name] = handler

    def start(self) -> None:
        # short poll interval keeps stop() prompt
        self._thread = threading.Thread(
            target=lambda: self._httpd.serve_forever(poll_interval=0.05),
            name="rpc-server",
            daemon=True,
        )
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join()
            self._thread = None

    def __enter__(self) -> "RpcServer":
        self.start()
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.stop()

    def dispatch(self, call: MethodCall) -> MethodResponse:
        handler = self._handlers.get(call.method)
        if handler is None:
            return MethodResponse.failure(
                Fault(-32601, f"method {call.method!r} not found")
            )
        try:
            result = handler(*call.params)
        except Fault as fault:
            return MethodResponse.failure(fault)
        except TypeError as exc:
            # wrong parameter count/types; a handler-internal TypeError
            # lands here too, which we accept as the simpler convention
            return MethodResponse.failure(Fault(-32602, f"bad parameters: {exc}"))
        except Exception as exc:  # noqa: BLE001 - fault boundary
            log.exception("handler %s failed", call.method)
            return MethodResponse.failure(Fault(-32603, f"internal error: {exc}"))
        return MethodResponse.success(result)

    def record(self, body: bytes) -> None:
        if self.record_requests:
            with self._lock:
                self.requests.append(body)


class _RequestHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def rpc(self) -> RpcServer:
        return self.server.rpc_server  # type: ignore[attr-defined]

    def log_message(self, fmt: str, *args: Any) -> None:
        log.debug("%s %s", self.address_string(), fmt % args)

    def _cors_headers(self) -> None:
        if self.rpc.cors:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _send_payload(self, status: int, content_type: str, payload: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self._cors_headers()
        self.end_headers()
        self.wfile.write(payload)

    def _refuse(self, status: int, message: str) -> None:
        self.close_connection = True
        self.send_error(status, message)

    def do_OPTIONS(self) -> None:  # noqa: N802 - http.server naming
        if not self.rpc.cors:
            self._refuse(501, "CORS not enabled")
            return
        self.send_response(204)
        self._cors_headers()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_POST(self) -> None:  # noqa: N802
        if self.path not in ("/", "/RPC2"):
            self._refuse(404, "no such endpoint")
            return
        if "chunked" in (self.headers.get("Transfer-Encoding") or "").lower():
            self._refuse(411, "chunked requests not accepted")
            return
        length_header = self.headers.get("Content-Length")
        if length_header is None:
            self._refuse(411, "Content-Length required")
            return
        try:
            length = int(length_header)
        except ValueError:
            self._refuse(400, "invalid Content-Length")
            return
        body = self.rfile.read(length)
        self.rpc.record(body)
        try:
            call = decode_call(body)
        except DecodeError as exc:
            response = MethodResponse.failure(Fault(-32700, f"parse error: {exc}"))
        else:
            response = self.rpc.dispatch(call)
        try:
            payload = encode_response(response)
        except EncodeError as exc:
            payload = encode_response(
                MethodResponse.failure(Fault(-32603, f"unencodable result: {exc}"))
            )
        self._send_payload(200, "text/xml", payload)

    def do_GET(self) -> None:  # noqa: N802
        ui_dir = self.rpc.ui_dir
        if ui_dir is None or not self.path.startswith("/ui"):
            self._refuse(404, "no such endpoint")
            return
        relative = self.path[len("/ui") :].split("?", 1)[0].lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        # traversal guard: the resolved path must stay inside ui_dir
        if ui_dir not in target.parents and target != ui_dir:
            self._refuse(404, "not found")
            return
        if not target.is_file():
            self._refuse(404, "not found")
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send_payload(200, content_type, target.read_bytes())
