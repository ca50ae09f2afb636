"""Shared fixtures and helpers: worker shims, wire-value generators,
bitwise payload comparison, and the acceptance-criterion reporter."""

from __future__ import annotations

import os
import struct
import sys
from pathlib import Path

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_criterion(name: str, ok: bool, detail: str) -> bool:
    """Print and remember one acceptance pass/fail line."""
    line = f"{name}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_worker_shim(
    directory: Path,
    name: str = "rfim",
    dump_dir: Path | None = None,
    probe_dir: Path | None = None,
) -> Path:
    """Write an executable worker shim into `directory`.

    The shim execs the installed simulator module; optional extras bake in
    a --dump target and a concurrency probe (a marker file that exists
    exactly while the worker runs).
    """
    directory.mkdir(parents=True, exist_ok=True)
    lines = ["#!/bin/sh"]
    command = f'{sys.executable} -m rfimnet.simcli'
    if dump_dir is not None:
        command += f' --dump "{dump_dir}"'
    command += ' "$@"'
    if probe_dir is not None:
        lines += [
            f'touch "{probe_dir}/$$.running"',
            command,
            "rc=$?",
            f'rm -f "{probe_dir}/$$.running"',
            "exit $rc",
        ]
    else:
        lines.append(f"exec {command}")
    shim = directory / name
    shim.write_text("\n".join(lines) + "\n")
    shim.chmod(0o755)
    return shim


@pytest.fixture
def bin_dir(tmp_path):
    """Directory containing a plain worker shim named `rfim`."""
    make_worker_shim(tmp_path / "bin")
    return tmp_path / "bin"


# -- randomized wire values ------------------------------------------------

_TEXT_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    " _-.:,;!?/()[]{}<>&'\"=+*%$#@éß世界"
)


def random_text(rng: np.random.Generator, max_len: int = 12) -> str:
    length = int(rng.integers(0, max_len + 1))
    return "".join(rng.choice(list(_TEXT_ALPHABET)) for _ in range(length))


def random_wire_value(rng: np.random.Generator, depth: int = 4):
    """One random payload value; containers only while depth remains."""
    kinds = ["int", "double", "string", "bool"]
    if depth > 0:
        kinds += ["array", "struct"]
    kind = rng.choice(kinds)
    if kind == "int":
        return int(rng.integers(-(2**31), 2**31))
    if kind == "double":
        mantissa = float(rng.normal())
        exponent = int(rng.integers(-20, 21))
        return mantissa * 10.0**exponent
    if kind == "string":
        return random_text(rng)
    if kind == "bool":
        return bool(rng.integers(0, 2))
    width = int(rng.integers(0, 9))
    if kind == "array":
        return [random_wire_value(rng, depth - 1) for _ in range(width)]
    return {
        f"k{i}_{random_text(rng, 4)}": random_wire_value(rng, depth - 1)
        for i in range(width)
    }


def wire_equal(a, b) -> bool:
    """Structural equality with bit-exact float comparison."""
    if type(a) is not type(b):
        return False
    if isinstance(a, float):
        return struct.pack("<d", a) == struct.pack("<d", b)
    if isinstance(a, list):
        return len(a) == len(b) and all(wire_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        return list(a.keys()) == list(b.keys()) and all(
            wire_equal(a[k], b[k]) for k in a
        )
    return a == b
