"""XML codec for methodCall/methodResponse documents.

Encoding builds the document by string concatenation; the format is flat
enough that a serializer buys nothing. Decoding walks an ElementTree.
Doubles are rendered with repr(), which is shortest-round-trip exact, so
decode(encode(d)) is bit-identical for every finite double. The legacy
extensions <nil>, <dateTime.iso8601> and <base64> are rejected in both
directions; `<i4>` is accepted as an int alias on decode; a `<value>`
with no type tag decodes as a string.
"""

from __future__ import annotations

import math
from typing import Any, List, Optional, Tuple
from xml.etree import ElementTree
from xml.sax.saxutils import escape

from .values import Fault, MethodCall, MethodResponse

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1

_UNSUPPORTED_TAGS = ("nil", "dateTime.iso8601", "base64")


class EncodeError(ValueError):
    """Value cannot be represented on the wire."""


class DecodeError(ValueError):
    """Malformed or unsupported document; carries position when known."""

    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None):
        if position is not None:
            message = f"{message} (line {position[0]}, column {position[1]})"
        super().__init__(message)
        self.position = position


def encode_value(value: Any) -> str:
    """Return the `<value>…</value>` fragment for one payload value."""
    # bool first: bool is a subclass of int
    if isinstance(value, bool):
        return f"<value><boolean>{1 if value else 0}</boolean></value>"
    if isinstance(value, int):
        if not INT32_MIN <= value <= INT32_MAX:
            raise EncodeError(f"int {value} exceeds 32-bit range")
        return f"<value><int>{value}</int></value>"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise EncodeError(f"non-finite double {value!r} not representable")
        # float() normalizes subclasses (e.g. numpy scalars) whose repr
        # is not a bare decimal literal
        return f"<value><double>{float(value)!r}</double></value>"
    if isinstance(value, str):
        return f"<value><string>{escape(value)}</string></value>"
    if isinstance(value, (list, tuple)):
        items = "".join(encode_value(item) for item in value)
        return f"<value><array><data>{items}</data></array></value>"
    if isinstance(value, dict):
        members = []
        for key, item in value.items():
            if not isinstance(key, str):
                raise EncodeError(f"struct key {key!r} is not a string")
            members.append(
                f"<member><name>{escape(key)}</name>{encode_value(item)}</member>"
            )
        return f"<value><struct>{''.join(members)}</struct></value>"
    raise EncodeError(f"unsupported value type {type(value).__name__}")


def _encode_params(params: List[Any]) -> str:
    parts = "".join(f"<param>{encode_value(p)}</param>" for p in params)
    return f"<params>{parts}</params>"


def encode_call(call: MethodCall) -> bytes:
    doc = (
        '<?xml version="1.0"?>\n'
        f"<methodCall><methodName>{escape(call.method)}</methodName>"
        f"{_encode_params(call.params)}</methodCall>\n"
    )
    return doc.encode("utf-8")


def encode_response(response: MethodResponse) -> bytes:
    if response.fault is not None:
        fault_value = encode_value(
            {"faultCode": response.fault.code, "faultString": response.fault.message}
        )
        body = f"<fault>{fault_value}</fault>"
    else:
        body = _encode_params([response.result])
    doc = f'<?xml version="1.0"?>\n<methodResponse>{body}</methodResponse>\n'
    return doc.encode("utf-8")


def _parse_document(data: bytes, expected_root: str) -> ElementTree.Element:
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise DecodeError(f"malformed XML: {exc.msg}", exc.position) from exc
    if root.tag != expected_root:
        raise DecodeError(f"expected <{expected_root}>, found <{root.tag}>")
    return root


def decode_value(elem: ElementTree.Element) -> Any:
    """Decode one `<value>` element."""
    if elem.tag != "value":
        raise DecodeError(f"expected <value>, found <{elem.tag}>")
    children = list(elem)
    if not children:
        # untagged value: the text is a string
        return elem.text or ""
    if len(children) > 1:
        raise DecodeError("multiple type elements inside <value>")
    typed = children[0]
    tag = typed.tag
    if tag in _UNSUPPORTED_TAGS:
        raise DecodeError(f"unsupported XML-RPC extension <{tag}>")
    if tag in ("int", "i4"):
        text = (typed.text or "").strip()
        try:
            number = int(text)
        except ValueError:
            raise DecodeError(f"invalid int literal {text!r}") from None
        if not INT32_MIN <= number <= INT32_MAX:
            raise DecodeError(f"int {number} exceeds 32-bit range")
        return number
    if tag == "boolean":
        text = (typed.text or "").strip()
        if text == "0":
            return False
        if text == "1":
            return True
        raise DecodeError(f"invalid boolean literal {text!r}")
    if tag == "double":
        text = (typed.text or "").strip()
        try:
            number = float(text)
        except ValueError:
            raise DecodeError(f"invalid double literal {text!r}") from None
        if not math.isfinite(number):
            raise DecodeError(f"non-finite double {text!r} on the wire")
        return number
    if tag == "string":
        if len(typed):
            raise DecodeError("unexpected children inside <string>")
        return typed.text or ""
    if tag == "array":
        data = list(typed)
        if len(data) != 1 or data[0].tag != "data":
            raise DecodeError("<array> must contain exactly one <data>")
        return [decode_value(item) for item in data[0]]
    if tag == "struct":
        out = {}
        for member in typed:
            if member.tag != "member":
                raise DecodeError(f"expected <member>, found <{member.tag}>")
            name_elem = member.find("name")
            value_elem = member.find("value")
            if name_elem is None or value_elem is None:
                raise DecodeError("<member> lacks <name> or <value>")
            out[name_elem.text or ""] = decode_value(value_elem)
        return out
    raise DecodeError(f"unknown type tag <{tag}>")


def _decode_params(parent: ElementTree.Element) -> List[Any]:
    params_elem = parent.find("params")
    if params_elem is None:
        return []
    out = []
    for param in params_elem:
        if param.tag != "param":
            raise DecodeError(f"expected <param>, found <{param.tag}>")
        values = list(param)
        if len(values) != 1:
            raise DecodeError("<param> must contain exactly one <value>")
        out.append(decode_value(values[0]))
    return out


def decode_call(data: bytes) -> MethodCall:
    root = _parse_document(data, "methodCall")
    name_elem = root.find("methodName")
    if name_elem is None or not (name_elem.text or "").strip():
        raise DecodeError("missing or empty <methodName>")
    try:
        return MethodCall((name_elem.text or "").strip(), _decode_params(root))
    except ValueError as exc:
        if isinstance(exc, DecodeError):
            raise
        raise DecodeError(str(exc)) from None


def decode_response(data: bytes) -> MethodResponse:
    root = _parse_document(data, "methodResponse")
    fault_elem = root.find("fault")
    params_elem = root.find("params")
    if fault_elem is not None and params_elem is not None:
        raise DecodeError("response carries both <params> and <fault>")
    if fault_elem is not None:
        values = list(fault_elem)
        if len(values) != 1:
            raise DecodeError("<fault> must contain exactly one <value>")
        payload = decode_value(values[0])
        if (
            not isinstance(payload, dict)
            or not isinstance(payload.get("faultCode"), int)
            or not isinstance(payload.get("faultString"), str)
        ):
            raise DecodeError("fault struct lacks int faultCode / string faultString")
        return MethodResponse.failure(
            Fault(payload["faultCode"], payload["faultString"])
        )
    params = _decode_params(root)
    if len(params) != 1:
        raise DecodeError("response must carry exactly one result value")
    return MethodResponse.success(params[0])
