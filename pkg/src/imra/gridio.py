"""Bit-exact file formats for grids and pyramids.

Grid files carry the magic ``IMRA``, a format version, the dimension,
the level, per-axis lo/extent pairs, and a raw little-endian binary64
payload in row-major order with the last axis fastest.  A pyramid is a
directory holding ``meta.json`` plus one grid file per channel.  Writes
are deterministic byte for byte: metadata keys are sorted and payloads
are plain memory dumps.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import (
    FileFormatError,
    PayloadValueError,
    TruncatedPayloadError,
)
from .filters import bank_from_text, bank_to_text
from .transform import GridFunction, WaveletPyramid, box_shape

MAGIC = b"IMRA"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIBi")
_AXIS = struct.Struct("<qQ")


def write_grid(path, grid: GridFunction) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, grid.dim, grid.level))
        for lo, hi in grid.box:
            fh.write(_AXIS.pack(lo, hi - lo + 1))
        fh.write(np.ascontiguousarray(grid.values, dtype="<f8").tobytes())


def read_grid(path) -> GridFunction:
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FileFormatError(f"{path}: header truncated at {len(raw)} bytes")
    magic, version, dim, level = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FileFormatError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FileFormatError(f"{path}: unsupported format version {version}")
    if dim < 1:
        raise FileFormatError(f"{path}: dimension must be positive")
    offset = _HEADER.size
    box = []
    for _ in range(dim):
        if offset + _AXIS.size > len(raw):
            raise FileFormatError(f"{path}: axis table truncated")
        lo, extent = _AXIS.unpack_from(raw, offset)
        offset += _AXIS.size
        if extent == 0:
            raise FileFormatError(f"{path}: empty axis extent")
        box.append((lo, lo + extent - 1))
    box = tuple(box)
    expected = 8 * int(np.prod([hi - lo + 1 for lo, hi in box], dtype=object))
    payload = raw[offset:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: payload holds {len(payload)} bytes, header promises {expected}"
        )
    if len(payload) > expected:
        raise FileFormatError(f"{path}: {len(payload) - expected} trailing bytes")
    values = np.frombuffer(payload, dtype="<f8").reshape(box_shape(box))
    if not np.all(np.isfinite(values)):
        raise PayloadValueError(f"{path}: payload contains non-finite values")
    return GridFunction(dim, level, box, values.astype(np.float64))


def _orientation_tag(s) -> str:
    return "".join(str(b) for b in s)


def _channel_name(j: int, s) -> str:
    return f"d_{j}_{_orientation_tag(s)}.imra"


def write_pyramid(path, pyr: WaveletPyramid) -> None:
    """Write a pyramid container directory (meta.json plus channel files)."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": FORMAT_VERSION,
        "dim": pyr.dim,
        "bank": {"id": pyr.bank.bank_id, "text": bank_to_text(pyr.bank)},
        "j0": pyr.j0,
        "J": pyr.finest_level,
        "boxes": {
            "grids": {str(j): [list(ax) for ax in box]
                      for j, box in sorted(pyr.box_table.items())},
            "details": {f"{j}_{_orientation_tag(s)}": [list(ax) for ax in grid.box]
                        for (j, s), grid in sorted(pyr.details.items())},
        },
    }
    text = json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n"
    (path / "meta.json").write_text(text)
    write_grid(path / "c.imra", pyr.coarse)
    for (j, s), grid in pyr.details.items():
        write_grid(path / _channel_name(j, s), grid)


def read_pyramid(path) -> WaveletPyramid:
    path = Path(path)
    meta_path = path / "meta.json"
    if not meta_path.exists():
        raise FileFormatError(f"{path}: missing meta.json")
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{meta_path}: {exc}") from exc
    if meta.get("format") != FORMAT_VERSION:
        raise FileFormatError(f"{meta_path}: unsupported format {meta.get('format')}")
    bank = bank_from_text(meta["bank"]["text"])
    dim = int(meta["dim"])
    j0 = int(meta["j0"])
    levels = int(meta["J"]) - j0
    box_table = {int(j): tuple(tuple(ax) for ax in box)
                 for j, box in meta["boxes"]["grids"].items()}
    coarse = read_grid(path / "c.imra")
    if coarse.dim != dim or coarse.level != j0:
        raise FileFormatError(f"{path}: coarse channel disagrees with meta.json")
    details = {}
    for key in meta["boxes"]["details"]:
        j_text, _, tag = key.rpartition("_")
        j = int(j_text)
        s = tuple(int(b) for b in tag)
        grid = read_grid(path / _channel_name(j, s))
        if grid.level != j or grid.dim != dim:
            raise FileFormatError(f"{path}: channel {key} disagrees with meta.json")
        details[(j, s)] = grid
    return WaveletPyramid(bank, j0, levels, coarse, details, box_table)
