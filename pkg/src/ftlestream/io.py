"""Binary and CSV file formats.

Binary files are a sequence of blocks, each a 24-byte little-endian header
``"FTLE" | u32 version | u32 kind | u32 dim | u64 count`` followed by its
payload. A mesh file is a coords block followed by a faces block.

CSV files hold one record per line in the same column order. ``#`` starts a
comment; a ``#@`` line is a block directive such as
``#@ FTLE version=1 kind=faces dim=2 count=2``. Single-kind files may omit the
directive, in which case the dimension is inferred from the column count.
"""
from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ValidationError
from .mesh import MAX_POINTS, FlowMap, NeighborList, SimplicialMesh, check_dim, check_faces

MAGIC = b"FTLE"
VERSION = 1
HEADER = struct.Struct("<4sIIIQ")

KINDS = {"coords": 0, "faces": 1, "flowmap": 2, "neighbors": 3, "field": 4}
KIND_NAMES = {v: k for k, v in KINDS.items()}


def _columns(kind: str, dim: int) -> int:
    return {"coords": dim, "flowmap": dim, "faces": dim + 1,
            "neighbors": 2 * dim, "field": 1}[kind]


def _dtype(kind: str):
    return np.dtype("<i4") if kind in ("faces", "neighbors") else np.dtype("<f8")


@dataclass
class Block:
    kind: str
    dim: int
    data: np.ndarray
    path: str
    offset: int | None = None  # payload byte offset (binary)
    lines: list[int] = field(default_factory=list)  # source line per row (CSV)

    def locate(self, row: int) -> str:
        if self.lines:
            return f"{self.path}:{self.lines[row]}"
        row_bytes = _columns(self.kind, self.dim) * _dtype(self.kind).itemsize
        return f"{self.path}@{self.offset + row * row_bytes}"


def detect_format(path, fmt: str | None = None) -> str:
    if fmt is not None:
        if fmt not in ("binary", "csv"):
            raise FormatError(f"unknown format {fmt!r}")
        return fmt
    return "csv" if os.fspath(path).lower().endswith(".csv") else "binary"


# -- binary -----------------------------------------------------------------

def write_block(fh, kind: str, dim: int, data: np.ndarray) -> None:
    data = np.ascontiguousarray(data, dtype=_dtype(kind))
    count = data.shape[0]
    fh.write(HEADER.pack(MAGIC, VERSION, KINDS[kind], dim, count))
    fh.write(data.tobytes())


def read_binary_blocks(path) -> list[Block]:
    path = os.fspath(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    blocks, pos = [], 0
    while pos < len(raw):
        if len(raw) - pos < HEADER.size:
            raise FormatError(f"{path}@{pos}: truncated header")
        magic, version, kind, dim, count = HEADER.unpack_from(raw, pos)
        if magic != MAGIC:
            raise FormatError(f"{path}@{pos}: bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"{path}@{pos + 4}: unsupported version {version}")
        if kind not in KIND_NAMES:
            raise FormatError(f"{path}@{pos + 8}: unknown kind {kind}")
        name = KIND_NAMES[kind]
        if dim not in (2, 3) and not (name == "field" and dim in (1, 2, 3)):
            raise ValidationError(f"{path}@{pos + 12}: unsupported dim {dim}")
        if count > MAX_POINTS:
            raise ValidationError(f"{path}@{pos + 16}: count {count} exceeds int32 index range")
        cols = _columns(name, dim)
        dt = _dtype(name)
        start = pos + HEADER.size
        end = start + count * cols * dt.itemsize
        if end > len(raw):
            raise FormatError(f"{path}@{start}: truncated {name} payload")
        data = np.frombuffer(raw, dtype=dt, count=count * cols, offset=start)
        blocks.append(Block(name, dim, data.reshape(count, cols).astype(dt.newbyteorder("=")),
                            path, offset=start))
        pos = end
    if not blocks:
        raise FormatError(f"{path}@0: empty file")
    return blocks


# -- CSV --------------------------------------------------------------------

def _fmt_value(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else repr(float(v))
    return str(int(v))


def write_csv_block(fh, kind: str, dim: int, data: np.ndarray) -> None:
    data = np.asarray(data)
    fh.write(f"#@ FTLE version={VERSION} kind={kind} dim={dim} count={data.shape[0]}\n")
    if kind == "field":
        for i, v in enumerate(data.reshape(-1)):
            fh.write(f"{i},{_fmt_value(v)}\n")
        return
    for row in data.tolist():
        fh.write(",".join(_fmt_value(v) for v in row) + "\n")


def _parse_directive(text: str, path: str, lineno: int) -> dict:
    fields = {}
    for tok in text.split():
        if tok == "FTLE":
            continue
        if "=" not in tok:
            raise FormatError(f"{path}:{lineno}: malformed directive token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    if fields.get("kind") not in KINDS:
        raise FormatError(f"{path}:{lineno}: directive lacks a known kind")
    try:
        fields["dim"] = int(fields["dim"]) if "dim" in fields else None
    except ValueError:
        raise FormatError(f"{path}:{lineno}: bad dim {fields['dim']!r}") from None
    return fields


def read_csv_blocks(path, default_kind: str) -> list[Block]:
    path = os.fspath(path)
    pending: list[tuple[dict, list, list]] = []
    current = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if s.startswith("#@"):
                current = (_parse_directive(s[2:], path, lineno), [], [])
                pending.append(current)
                continue
            s = s.split("#", 1)[0].strip()
            if not s:
                continue
            if current is None:
                current = ({"kind": default_kind, "dim": None}, [], [])
                pending.append(current)
            current[1].append([c.strip() for c in s.split(",")])
            current[2].append(lineno)
    blocks = []
    for meta, rows, lines in pending:
        blocks.append(_csv_rows_to_block(meta, rows, lines, path))
    if not blocks:
        raise FormatError(f"{path}:1: no records")
    return blocks


def _csv_rows_to_block(meta, rows, lines, path) -> Block:
    kind, dim = meta["kind"], meta["dim"]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        w0 = len(rows[0])
        bad = next(i for i, r in enumerate(rows) if len(r) != w0)
        raise FormatError(f"{path}:{lines[bad]}: expected {w0} columns, got {len(rows[bad])}")
    width = widths.pop() if widths else None
    if kind == "field":
        if width not in (None, 2):
            raise FormatError(f"{path}:{lines[0]}: field rows must be 'index,value'")
        dim = dim or 1
    elif dim is None:
        if width is None:
            raise FormatError(f"{path}: cannot infer dim of an empty {kind} block")
        dim = {"coords": width, "flowmap": width, "faces": width - 1,
               "neighbors": width // 2}[kind]
    if kind != "field":
        try:
            check_dim(dim)
        except ValidationError as exc:
            raise ValidationError(f"{path}:{lines[0] if lines else 0}: {exc}") from None
        if width is not None and width != _columns(kind, dim):
            raise FormatError(
                f"{path}:{lines[0]}: {kind} rows need {_columns(kind, dim)} columns, got {width}"
            )
    dt = _dtype(kind)
    if kind == "field":
        out = np.empty((len(rows), 1), dtype=dt)
        for i, (r, ln) in enumerate(zip(rows, lines)):
            try:
                idx, val = int(r[0]), float(r[1])
            except ValueError:
                raise FormatError(f"{path}:{ln}: unparsable record {','.join(r)!r}") from None
            if idx != i:
                raise FormatError(f"{path}:{ln}: expected index {i}, got {idx}")
            out[i, 0] = val
    else:
        cols = _columns(kind, dim)
        out = np.empty((len(rows), cols), dtype=dt)
        conv = int if dt.kind == "i" else float
        for i, (r, ln) in enumerate(zip(rows, lines)):
            try:
                out[i] = [conv(c) for c in r]
            except (ValueError, OverflowError):
                raise FormatError(f"{path}:{ln}: unparsable record {','.join(r)!r}") from None
    count = meta.get("count")
    if count is not None and int(count) != len(rows):
        raise FormatError(f"{path}: directive count={count} but {len(rows)} records follow")
    return Block(kind, dim, out, path, lines=list(lines))


# -- typed readers/writers ----------------------------------------------------

def read_blocks(path, fmt: str | None, default_kind: str) -> list[Block]:
    if not os.path.exists(path):
        raise FormatError(f"{os.fspath(path)}: no such file")
    if detect_format(path, fmt) == "csv":
        return read_csv_blocks(path, default_kind)
    return read_binary_blocks(path)


def _write(path, fmt, blocks) -> None:
    if detect_format(path, fmt) == "csv":
        with open(path, "w", encoding="utf-8") as fh:
            for kind, dim, data in blocks:
                write_csv_block(fh, kind, dim, data)
    else:
        with open(path, "wb") as fh:
            for kind, dim, data in blocks:
                write_block(fh, kind, dim, data)


def _single(blocks: list[Block], kind: str) -> Block:
    if len(blocks) != 1 or blocks[0].kind != kind:
        got = [b.kind for b in blocks]
        raise FormatError(f"{blocks[0].path}: expected one {kind} block, found {got}")
    return blocks[0]


def save_mesh(path, mesh: SimplicialMesh, fmt: str | None = None) -> None:
    _write(path, fmt, [("coords", mesh.dim, mesh.coords), ("faces", mesh.dim, mesh.faces)])


def load_mesh(path, fmt: str | None = None) -> SimplicialMesh:
    blocks = read_blocks(path, fmt, "coords")
    kinds = [b.kind for b in blocks]
    if kinds != ["coords", "faces"]:
        raise FormatError(f"{os.fspath(path)}: mesh needs coords then faces blocks, found {kinds}")
    coords, faces = blocks
    if faces.dim != coords.dim:
        raise ValidationError(f"{faces.locate(0) if len(faces.data) else faces.path}: "
                              f"faces dim {faces.dim} != coords dim {coords.dim}")
    check_faces(faces.data, coords.data.shape[0], faces.locate)
    return SimplicialMesh(coords.data, faces.data)


def save_flowmap(path, fm: FlowMap, fmt: str | None = None) -> None:
    _write(path, fmt, [("flowmap", fm.dim, fm.values)])


def load_flowmap(path, t_horizon: float = 1.0, fmt: str | None = None) -> FlowMap:
    b = _single(read_blocks(path, fmt, "flowmap"), "flowmap")
    bad = np.nonzero(~np.isfinite(b.data).all(axis=1))[0]
    if bad.size:
        raise ValidationError(f"{b.locate(int(bad[0]))}: non-finite flow-map value")
    return FlowMap(b.data, t_horizon)


def save_neighbors(path, nl: NeighborList, fmt: str | None = None) -> None:
    _write(path, fmt, [("neighbors", nl.dim, nl.entries)])


def load_neighbors(path, fmt: str | None = None) -> NeighborList:
    return NeighborList(_single(read_blocks(path, fmt, "neighbors"), "neighbors").data)


def save_field(path, values: np.ndarray, dim: int = 1, fmt: str | None = None) -> None:
    values = np.asarray(values, dtype=np.float64).reshape(-1, 1)
    _write(path, fmt, [("field", dim, values)])


def load_field(path, fmt: str | None = None) -> np.ndarray:
    return _single(read_blocks(path, fmt, "field"), "field").data.reshape(-1)
