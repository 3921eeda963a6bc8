"""Simplicial meshes, point adjacency and the axis-ordered neighbor list.

The neighbor list holds ``2 * dim`` signed 32-bit indexes per point in the
order ``[x-, x+, y-, y+(, z-, z+)]``; ``-1`` marks a missing neighbor. It is
computed once on the host so that the FTLE pass only ever reads a regular,
fixed-stride index stream.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ValidationError

MAX_POINTS = 2**31 - 1
MISSING = -1
# Points per work unit; fixed so results never depend on the thread count.
CHUNK = 4096


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def check_dim(dim: int) -> None:
    if dim not in (2, 3):
        raise ValidationError(f"unsupported dim {dim}; expected 2 or 3")


def check_faces(
    faces: np.ndarray,
    n_points: int,
    locate: Callable[[int], str] = lambda i: f"face {i}",
) -> None:
    """Raise ``ValidationError`` naming the first bad face."""
    if faces.size == 0:
        return
    bad = np.nonzero(((faces < 0) | (faces >= n_points)).any(axis=1))[0]
    if bad.size:
        row = int(bad[0])
        raise ValidationError(
            f"{locate(row)}: index out of range {faces[row].tolist()} "
            f"(n_points={n_points})"
        )
    s = np.sort(faces, axis=1)
    rep = np.nonzero((s[:, 1:] == s[:, :-1]).any(axis=1))[0]
    if rep.size:
        row = int(rep[0])
        raise ValidationError(
            f"{locate(row)}: vertex repeated in face {faces[row].tolist()}"
        )


@dataclass(frozen=True)
class SimplicialMesh:
    """Point coordinates plus triangle (2D) or tetrahedron (3D) connectivity."""

    coords: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim != 2:
            raise ValidationError("coords must be an (n_points, dim) array")
        check_dim(coords.shape[1])
        if coords.shape[0] > MAX_POINTS:
            raise ValidationError(f"{coords.shape[0]} points exceed the int32 index range")
        dim = coords.shape[1]
        faces = np.asarray(self.faces)
        if faces.size == 0:
            faces = np.empty((0, dim + 1), dtype=np.int32)
        if faces.ndim != 2 or faces.shape[1] != dim + 1:
            raise ValidationError(f"faces must be an (n_faces, {dim + 1}) array")
        check_faces(faces, coords.shape[0])
        object.__setattr__(self, "coords", _readonly(coords))
        object.__setattr__(self, "faces", _readonly(faces.astype(np.int32)))

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def n_faces(self) -> int:
        return self.faces.shape[0]


@dataclass(frozen=True)
class FlowMap:
    """Advected position of every mesh point after integrating for ``t_horizon``."""

    values: np.ndarray
    t_horizon: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("flow map must be an (n_points, dim) array")
        check_dim(values.shape[1])
        if self.t_horizon == 0 or not np.isfinite(self.t_horizon):
            raise ValidationError("t_horizon must be finite and nonzero")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "t_horizon", float(self.t_horizon))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    def check_matches(self, mesh: SimplicialMesh) -> None:
        if self.values.shape != mesh.coords.shape:
            raise ValidationError(
                f"flow map shape {self.values.shape} does not match mesh "
                f"coords {mesh.coords.shape}"
            )


@dataclass(frozen=True)
class NeighborList:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries)
        if e.ndim != 2 or e.shape[1] not in (4, 6):
            raise ValidationError("neighbor entries must be (n_points, 4|6)")
        object.__setattr__(self, "entries", _readonly(e.astype(np.int32)))

    @property
    def dim(self) -> int:
        return self.entries.shape[1] // 2

    @property
    def n_points(self) -> int:
        return self.entries.shape[0]

    def missing_counts(self) -> dict[str, int]:
        """Number of ``-1`` entries per slot label (``x-``, ``x+``, ...)."""
        return {
            label: int((self.entries[:, k] == MISSING).sum())
            for k, label in enumerate(slot_labels(self.dim))
        }


def slot_labels(dim: int) -> list[str]:
    return [f"{ax}{sign}" for ax in "xyz"[:dim] for sign in "-+"]


@dataclass(frozen=True)
class AdjacencyList:
    """Face-sharing neighbors of every point in CSR layout.

    ``indices[indptr[p]:indptr[p + 1]]`` is the sorted neighbor set of ``p``.
    """

    indptr: np.ndarray
    indices: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.indptr) - 1

    def __getitem__(self, p: int) -> np.ndarray:
        return self.indices[self.indptr[p] : self.indptr[p + 1]]

    def __len__(self) -> int:
        return self.n_points


def build_adjacency(mesh: SimplicialMesh) -> AdjacencyList:
    n = mesh.n_points
    faces = mesh.faces.astype(np.int64)
    k = faces.shape[1]
    rows, cols = [], []
    for i in range(k):
        for j in range(k):
            if i != j:
                rows.append(faces[:, i])
                cols.append(faces[:, j])
    if faces.shape[0]:
        key = np.unique(np.concatenate(rows) * n + np.concatenate(cols))
        src, dst = np.divmod(key, n)
    else:
        src = dst = np.empty(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return AdjacencyList(_readonly(indptr), _readonly(dst.astype(np.int32)))


def squared_distance(coords: np.ndarray, p, q) -> np.ndarray:
    """Sum of squared coordinate differences, accumulated in axis order."""
    diff = coords[q] - coords[p]
    acc = diff[..., 0] * diff[..., 0]
    for a in range(1, coords.shape[1]):
        acc = acc + diff[..., a] * diff[..., a]
    return acc


def _select_chunk(coords, adjacency, lo, hi) -> np.ndarray:
    dim = coords.shape[1]
    out = np.full((hi - lo, 2 * dim), MISSING, dtype=np.int32)
    start, stop = adjacency.indptr[lo], adjacency.indptr[hi]
    q = adjacency.indices[start:stop].astype(np.int64)
    if q.size == 0:
        return out
    counts = np.diff(adjacency.indptr[lo : hi + 1])
    p = np.repeat(np.arange(lo, hi, dtype=np.int64), counts)
    dist2 = squared_distance(coords, p, q)
    for a in range(dim):
        delta = coords[q, a] - coords[p, a]
        for side, mask in ((0, delta < 0), (1, delta > 0)):
            if not mask.any():
                continue
            pp, qq = p[mask], q[mask]
            # primary key last: owning point, |delta|, distance, index
            order = np.lexsort((qq, dist2[mask], np.abs(delta[mask]), pp))
            pp, qq = pp[order], qq[order]
            first = np.ones(pp.size, dtype=bool)
            first[1:] = pp[1:] != pp[:-1]
            out[pp[first] - lo, 2 * a + side] = qq[first]
    return out


def precompute_neighbors(
    mesh: SimplicialMesh,
    adjacency: AdjacencyList | None = None,
    threads: int = 1,
) -> NeighborList:
    """Pick, per point and axis side, the closest face-adjacent point along that axis.

    Candidates for ``a-`` (``a+``) are adjacent points whose axis-``a``
    coordinate is strictly smaller (larger). The winner minimises the axis
    gap, then Euclidean distance, then index. Points with an equal coordinate
    never qualify for that axis.
    """
    if adjacency is None:
        adjacency = build_adjacency(mesh)
    if adjacency.n_points != mesh.n_points:
        raise ValidationError("adjacency was built for a different mesh")
    n = mesh.n_points
    bounds = [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]
    work = lambda b: _select_chunk(mesh.coords, adjacency, *b)
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    if not parts:
        return NeighborList(np.empty((0, 2 * mesh.dim), dtype=np.int32))
    return NeighborList(np.concatenate(parts))


class Violation(NamedTuple):
    point: int
    slot: int
    kind: str  # "range" | "self" | "sign" | "shape"
    message: str


def validate_neighbor_list(mesh: SimplicialMesh, nl: NeighborList) -> list[Violation]:
    """Return every invariant violation in ``nl``; an empty list means valid."""
    if nl.entries.shape != (mesh.n_points, 2 * mesh.dim):
        return [
            Violation(-1, -1, "shape",
                      f"entries shape {nl.entries.shape} != {(mesh.n_points, 2 * mesh.dim)}")
        ]
    report = []
    labels = slot_labels(mesh.dim)
    e = nl.entries.astype(np.int64)
    n = mesh.n_points
    own = np.arange(n)
    for k, label in enumerate(labels):
        col = e[:, k]
        for p in np.nonzero((col < MISSING) | (col >= n))[0]:
            report.append(Violation(int(p), k, "range", f"{label} entry {col[p]} out of range"))
        for p in np.nonzero(col == own)[0]:
            report.append(Violation(int(p), k, "self", f"{label} entry refers to itself"))
        ok = (col >= 0) & (col < n) & (col != own)
        ps = own[ok]
        if ps.size == 0:
            continue
        a = k // 2
        delta = mesh.coords[col[ok], a] - mesh.coords[ps, a]
        wrong = delta >= 0 if k % 2 == 0 else delta <= 0
        for p in ps[wrong]:
            report.append(Violation(int(p), k, "sign", f"{label} neighbor {col[p]} lies on the wrong side"))
    report.sort(key=lambda v: (v.point, v.slot))
    return report
