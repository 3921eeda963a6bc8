"""Floating-point FTLE core: record gather, gradient, Cauchy-Green, eigenvalue, FTLE.

Every stage works on a single point or on a batch (leading axes), using only
elementwise arithmetic in a fixed order so the streaming pass and the
per-point oracle produce the same numbers. The stages avoid forcing a dtype,
which lets :mod:`ftlestream.flops` run them on counting scalars.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .mesh import CHUNK, MISSING, FlowMap, NeighborList, SimplicialMesh

LAMBDA_FLOOR = 1e-300


@dataclass(frozen=True)
class PointRecord:
    """Everything the core needs for one point (or a batch of points).

    ``coord_minus[..., a]`` is the axis-``a`` coordinate of the axis-``a``
    minus neighbor; ``fm_minus[..., a, :]`` is that neighbor's flow-map
    vector. Missing neighbors are replaced by the point itself.
    """

    coord_minus: np.ndarray
    coord_plus: np.ndarray
    fm_minus: np.ndarray
    fm_plus: np.ndarray

    @property
    def dim(self) -> int:
        return self.coord_minus.shape[-1]

    def values(self) -> np.ndarray:
        """Flattened payload: 12 doubles in 2D, 24 in 3D (per point)."""
        lead = self.coord_minus.shape[:-1]
        parts = [self.coord_minus, self.coord_plus,
                 self.fm_minus.reshape(lead + (-1,)), self.fm_plus.reshape(lead + (-1,))]
        return np.concatenate(parts, axis=-1)


def _gather(points: np.ndarray, entries: np.ndarray, coords: np.ndarray, fm: np.ndarray) -> PointRecord:
    # entries: (m, 2*dim) rows for ``points``
    own = points[:, None]
    idx = np.where(entries == MISSING, own, entries)
    minus, plus = idx[:, 0::2], idx[:, 1::2]
    axes = np.arange(coords.shape[1])
    return PointRecord(coords[minus, axes], coords[plus, axes], fm[minus], fm[plus])


def gather_record(p: int, nl: NeighborList, mesh: SimplicialMesh, fm: FlowMap) -> PointRecord:
    """Read the ``2*dim`` indexes of ``p`` and then the data they point at."""
    if not 0 <= p < mesh.n_points:
        raise IndexError(f"point {p} out of range")
    pts = np.array([p])
    rec = _gather(pts, nl.entries[pts].astype(np.int64), mesh.coords, fm.values)
    return PointRecord(rec.coord_minus[0], rec.coord_plus[0], rec.fm_minus[0], rec.fm_plus[0])


def gradient(rec: PointRecord) -> np.ndarray:
    """Flow-map Jacobian ``J[i, j] = d phi_i / d x_j`` by central/one-sided differences.

    A zero-width axis yields the identity column for that axis.
    """
    d = rec.dim
    denom = rec.coord_plus - rec.coord_minus
    degenerate = denom == 0
    safe = np.where(degenerate, 1.0, denom)
    diff = rec.fm_plus - rec.fm_minus  # [..., axis j, component i]
    jac = np.swapaxes(diff, -1, -2) / safe[..., None, :]
    return np.where(degenerate[..., None, :], np.eye(d), jac)


def cauchy_green(jac: np.ndarray) -> np.ndarray:
    """``J^T J``, upper triangle computed then mirrored."""
    d = jac.shape[-1]
    out = np.empty(jac.shape, dtype=jac.dtype)
    for i in range(d):
        for k in range(i, d):
            acc = jac[..., 0, i] * jac[..., 0, k]
            for r in range(1, d):
                acc = acc + jac[..., r, i] * jac[..., r, k]
            out[..., i, k] = acc
            out[..., k, i] = acc
    return out


def _unwrap(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def max_eigen_sym2(c: np.ndarray):
    c00, c01, c11 = c[..., 0, 0], c[..., 0, 1], c[..., 1, 1]
    half_trace = (c00 + c11) * 0.5
    det = c00 * c11 - c01 * c01
    disc = np.maximum(half_trace * half_trace - det, 0.0)
    return _unwrap(half_trace + np.sqrt(disc))


def max_eigen_sym3(c: np.ndarray):
    """Largest eigenvalue of a symmetric 3x3 matrix, trigonometric closed form.

    Accurate to a few ulps for separated eigenvalues; an exactly repeated
    largest eigenvalue puts the acos argument at -1 and costs about half the
    digits.
    """
    c00, c11, c22 = c[..., 0, 0], c[..., 1, 1], c[..., 2, 2]
    c01, c02, c12 = c[..., 0, 1], c[..., 0, 2], c[..., 1, 2]
    off = c01 * c01 + c02 * c02 + c12 * c12
    q = (c00 + c11 + c22) / 3.0
    d0, d1, d2 = c00 - q, c11 - q, c22 - q
    p = np.sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off) / 6.0)
    ps = np.where(p == 0, 1.0, p)
    b00, b11, b22 = d0 / ps, d1 / ps, d2 / ps
    b01, b02, b12 = c01 / ps, c02 / ps, c12 / ps
    det_b = (b00 * (b11 * b22 - b12 * b12)
             - b01 * (b01 * b22 - b12 * b02)
             + b02 * (b01 * b12 - b11 * b02))
    r = np.minimum(np.maximum(det_b / 2.0, -1.0), 1.0)
    phi = np.arccos(r) / 3.0
    lam = q + 2.0 * p * np.cos(phi)
    diag_max = np.maximum(np.maximum(c00, c11), c22)
    return _unwrap(np.where(off == 0, diag_max, lam))


def max_eigen_sym(c: np.ndarray):
    return max_eigen_sym2(c) if c.shape[-1] == 2 else max_eigen_sym3(c)


def ftle_from_lambda(lambda_max, t_horizon: float):
    """``ln(lambda_max) / (2|T|)``; NaN where ``lambda_max <= 1e-300``."""
    if t_horizon == 0:
        raise ValueError("t_horizon must be nonzero")
    lam = np.asarray(lambda_max)
    valid = lam > LAMBDA_FLOOR
    scale = 2.0 * abs(t_horizon)
    out = np.log(np.where(valid, lam, 1.0)) / scale
    return _unwrap(np.where(valid, out, np.nan))


def _ftle_records(rec: PointRecord, t_horizon: float) -> np.ndarray:
    lam = max_eigen_sym(cauchy_green(gradient(rec)))
    return np.asarray(ftle_from_lambda(lam, t_horizon), dtype=np.float64).reshape(-1)


def _check_inputs(mesh: SimplicialMesh, fm: FlowMap, nl: NeighborList | None = None) -> None:
    fm.check_matches(mesh)
    if nl is not None and nl.entries.shape != (mesh.n_points, 2 * mesh.dim):
        raise ValidationError(
            f"neighbor list shape {nl.entries.shape} does not match mesh "
            f"({mesh.n_points} points, dim {mesh.dim})"
        )


def compute_ftle_decoupled(
    mesh: SimplicialMesh, fm: FlowMap, nl: NeighborList, threads: int = 1
) -> np.ndarray:
    """Stream the precomputed neighbor list through the FTLE core.

    Points are processed in fixed-size index-ordered chunks; ``threads`` only
    changes how chunks are scheduled, never the result.
    """
    _check_inputs(mesh, fm, nl)
    n = mesh.n_points
    out = np.empty(n, dtype=np.float64)
    entries = nl.entries.astype(np.int64)

    def run(lo):
        hi = min(lo + CHUNK, n)
        pts = np.arange(lo, hi)
        rec = _gather(pts, entries[lo:hi], mesh.coords, fm.values)
        out[lo:hi] = _ftle_records(rec, fm.t_horizon)

    starts = range(0, n, CHUNK)
    if threads > 1 and n > CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, starts))
    else:
        for lo in starts:
            run(lo)
    return out


def find_neighbors_naive(mesh: SimplicialMesh, p: int) -> list[int]:
    """Neighbor slots of ``p`` found by scanning every face that contains it."""
    coords = mesh.coords.tolist()
    here = coords[p]
    touching = mesh.faces[(mesh.faces == p).any(axis=1)]
    cands = {int(q) for q in touching.ravel()} - {p}
    slots = []
    for a in range(mesh.dim):
        minus, plus = [], []
        for q in cands:
            there = coords[q]
            dist2 = (there[0] - here[0]) * (there[0] - here[0])
            for b in range(1, mesh.dim):
                dist2 = dist2 + (there[b] - here[b]) * (there[b] - here[b])
            gap = there[a] - here[a]
            if gap < 0:
                minus.append((-gap, dist2, q))
            elif gap > 0:
                plus.append((gap, dist2, q))
        slots.append(min(minus)[2] if minus else MISSING)
        slots.append(min(plus)[2] if plus else MISSING)
    return slots


def compute_ftle_naive(mesh: SimplicialMesh, fm: FlowMap) -> np.ndarray:
    """Reference path: locate neighbors on the fly for each point, then run the core."""
    _check_inputs(mesh, fm)
    out = np.empty(mesh.n_points, dtype=np.float64)
    for p in range(mesh.n_points):
        slots = np.array([find_neighbors_naive(mesh, p)], dtype=np.int64)
        rec = _gather(np.array([p]), slots, mesh.coords, fm.values)
        out[p] = _ftle_records(rec, fm.t_horizon)[0]
    return out
