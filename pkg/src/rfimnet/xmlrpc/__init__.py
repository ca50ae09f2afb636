"""From-scratch XML-RPC stack: value model, XML codec, HTTP client and server.

This is the only inter-process protocol in the system. Values travel as
plain Python objects (int, float, str, bool, list, dict); the codec turns
them into methodCall/methodResponse documents and back; the transport is
one HTTP POST per call.
"""

from .values import Fault, MethodCall, MethodResponse
from .codec import (
    DecodeError,
    EncodeError,
    decode_call,
    decode_response,
    encode_call,
    encode_response,
)
from .client import RpcClient, TransportError, http_post_call
from .server import RpcServer

__all__ = [
    "Fault",
    "MethodCall",
    "MethodResponse",
    "DecodeError",
    "EncodeError",
    "decode_call",
    "decode_response",
    "encode_call",
    "encode_response",
    "RpcClient",
    "TransportError",
    "http_post_call",
    "RpcServer",
]
