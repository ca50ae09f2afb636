"""HTTP client side of the wire: one POST per call, no connection reuse.

Transport problems (refused connection, timeouts, HTTP error statuses,
garbage response bodies) raise TransportError; a well-formed fault reply
is decoded and surfaced as Fault by RpcClient.call.
"""

from __future__ import annotations

import http.client
from typing import Any
from urllib.parse import urlsplit

from .codec import DecodeError, decode_response, encode_call
from .values import MethodCall, MethodResponse

DEFAULT_TIMEOUT = 30.0


class TransportError(Exception):
    """Network-level failure, distinct from an application Fault."""


def http_post_call(
    url: str,
    call: MethodCall,
    connect_timeout: float = DEFAULT_TIMEOUT,
    read_timeout: float = DEFAULT_TIMEOUT,
) -> MethodResponse:
    """POST one encoded call to `url` and decode the reply."""
    parts = urlsplit(url)
    if parts.scheme != "http" or not parts.hostname:
        raise TransportError(f"unsupported URL {url!r} (need http://host:port[/path])")
    body = encode_call(call)
    conn = http.client.HTTPConnection(
        parts.hostname, parts.port or 80, timeout=connect_timeout
    )
    try:
        try:
            conn.connect()
            # separate read deadline once the connection is up
            conn.sock.settimeout(read_timeout)
            conn.request(
                "POST",
                parts.path or "/",
                body=body,
                headers={"Content-Type": "text/xml"},
            )
            reply = conn.getresponse()
            payload = reply.read()
        except (OSError, http.client.HTTPException) as exc:
            raise TransportError(f"{url}: {exc}") from exc
        if reply.status != 200:
            raise TransportError(f"{url}: HTTP {reply.status} {reply.reason}")
        try:
            return decode_response(payload)
        except DecodeError as exc:
            raise TransportError(f"{url}: undecodable response: {exc}") from exc
    finally:
        conn.close()


class RpcClient:
    """Thin convenience handle: `client.call("finish", 3)` returns the result.

    Fault replies are raised as Fault; each call opens its own connection,
    so one handle may be shared by sequential callers but offers no
    concurrent-call guarantee.
    """

    def __init__(
        self,
        url: str,
        connect_timeout: float = DEFAULT_TIMEOUT,
        read_timeout: float = DEFAULT_TIMEOUT,
    ):
        self.url = url
        self.connect_timeout = connect_timeout
        self.read_timeout = read_timeout

    def call(self, method: str, *params: Any) -> Any:
        response = http_post_call(
            self.url,
            MethodCall(method, list(params)),
            connect_timeout=self.connect_timeout,
            read_timeout=self.read_timeout,
        )
        if response.fault is not None:
            raise response.fault
        return response.result
