"""Wire value model: method calls, responses and faults.

Payload values are ordinary Python objects. Supported kinds: bool, int
(32-bit range), float (finite), str, list, and dict with str keys; lists
and dicts nest arbitrarily. Anything else is rejected at encode time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, List, Optional

METHOD_NAME_RE = re.compile(r"[A-Za-z0-9_.:/]+\Z")


class Fault(Exception):
    """Application-level failure carried in a methodResponse.

    Conventions: -32700 parse error, -32601 method not found, -32602 bad
    parameters, -32603 internal error; application fault codes are >= 1.
    """

    def __init__(self, code: int, message: str):
        super().__init__(f"fault {int(code)}: {message}")
        self.code = int(code)
        self.message = str(message)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fault):
            return NotImplemented
        return (self.code, self.message) == (other.code, other.message)

    def __hash__(self) -> int:
        return hash((self.code, self.message))

    def __repr__(self) -> str:
        return f"Fault({self.code}, {self.message!r})"


@dataclass
class MethodCall:
    """One request: a method name plus an ordered parameter list."""

    method: str
    params: List[Any] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.method or not METHOD_NAME_RE.match(self.method):
            raise ValueError(f"invalid method name {self.method!r}")
        self.params = list(self.params)


@dataclass
class MethodResponse:
    """One reply: either a single result value or a Fault, never both.

    A successful result may legitimately be 0, "" or []; presence of a
    fault is therefore signalled by `fault is not None`, not truthiness.
    """

    result: Any = None
    fault: Optional[Fault] = None

    def __post_init__(self) -> None:
        if self.fault is not None and self.result is not None:
            raise ValueError("response carries both a result and a fault")

    @classmethod
    def success(cls, result: Any) -> "MethodResponse":
        return cls(result=result)

    @classmethod
    def failure(cls, fault: Fault) -> "MethodResponse":
        return cls(fault=fault)

    @property
    def is_fault(self) -> bool:
        return self.fault is not None
