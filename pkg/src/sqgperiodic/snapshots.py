"""Binary field snapshot format shared repo-wide.

Layout: magic "SQGF", uint32 format version, uint32 n, float64 box length,
float64 sample time, then n*n little-endian float64 samples (row-major).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import Field, Grid

MAGIC = b"SQGF"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIdd")


def write_snapshot(path: str | Path, f: Field, t: float) -> None:
    payload = _HEADER.pack(MAGIC, FORMAT_VERSION, f.grid.n, f.grid.length, t)
    data = np.ascontiguousarray(f.values, dtype="<f8").tobytes()
    Path(path).write_bytes(payload + data)


def read_snapshot(path: str | Path) -> tuple[Field, float]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated snapshot header")
    magic, version, n, length, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported snapshot version {version}")
    expected = _HEADER.size + 8 * n * n
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    values = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(n, n).copy()
    return Field(Grid(n, length), values), t
