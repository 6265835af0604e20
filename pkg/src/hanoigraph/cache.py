"""Binary distance-table cache.

Layout (little-endian): b"HGDT", version u8, k u8, n u8, source code u64,
then k^n distance entries as u16.  Total length 15 + 2 k^n bytes.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .core import HanoiError, PuzzleParams, State, render_state
from .metric import UNSEEN, DistanceTable

MAGIC = b"HGDT"
VERSION = 1
HEADER = struct.Struct("<4sBBBQ")


class CacheFormatError(HanoiError):
    pass


def cache_filename(params: PuzzleParams, source: int) -> str:
    label = render_state(State(params, source)).replace(",", "-")
    return f"hgdt_{params.pegs}_{params.disks}_{label}.bin"


def save_distance_table(table: DistanceTable, directory) -> str:
    params = table.params
    if params.pegs > 255 or params.disks > 255:
        raise CacheFormatError("k and n must fit in one byte")
    if (table.dist >= UNSEEN).any():
        raise CacheFormatError("distance entry does not fit below 65535")
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, cache_filename(params, table.source))
    header = HEADER.pack(MAGIC, VERSION, params.pegs, params.disks, table.source)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(table.dist.astype("<u2").tobytes())
    os.replace(tmp, path)
    return path


def load_distance_table(path) -> DistanceTable:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < HEADER.size:
        raise CacheFormatError(f"{path}: truncated header ({len(blob)} bytes)")
    magic, version, k, n, source = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    params = PuzzleParams(k, n)
    expected = HEADER.size + 2 * params.order
    if len(blob) != expected:
        raise CacheFormatError(
            f"{path}: truncated or oversized file, {len(blob)} bytes, expected {expected}"
        )
    if source >= params.order:
        raise CacheFormatError(f"{path}: source code {source} out of range")
    dist = np.frombuffer(blob, dtype="<u2", offset=HEADER.size).astype(np.uint16)
    if dist[source] != 0:
        raise CacheFormatError(f"{path}: distance at source is {dist[source]}, not 0")
    return DistanceTable(params, int(source), dist)
