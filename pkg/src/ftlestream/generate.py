"""Synthetic meshes and flow maps for tests, demos and the ``gen`` subcommand."""
from __future__ import annotations

import itertools

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import ValidationError
from .mesh import FlowMap, SimplicialMesh


def grid_side(n: int, dim: int) -> int:
    side = round(n ** (1 / dim))
    for s in (side - 1, side, side + 1):
        if s >= 1 and s**dim == n:
            return s
    raise ValidationError(f"grid with dim={dim} needs a perfect {'square' if dim == 2 else 'cube'} n, got {n}")


def grid_mesh(dim: int, side: int, spacing: float = 1.0, origin=None) -> SimplicialMesh:
    """Regular ``side**dim`` grid, x varying fastest.

    2D cells split along the (1,0)-(0,1) diagonal; 3D cells use the 6-tetrahedron
    Kuhn split along the main diagonal, so every axis edge is a mesh edge.
    """
    if dim not in (2, 3):
        raise ValidationError(f"unsupported dim {dim}")
    if side < 1:
        raise ValidationError("grid side must be >= 1")
    axes = [np.arange(side, dtype=np.float64) * spacing] * dim
    mesh_axes = np.meshgrid(*axes, indexing="ij")
    # column 0 (x) varies fastest in point order
    coords = np.stack([m.transpose().reshape(-1) for m in mesh_axes], axis=1)
    if origin is not None:
        coords = coords + np.asarray(origin, dtype=np.float64)
    stride = side ** np.arange(dim)
    faces = []
    for cell in itertools.product(range(side - 1), repeat=dim):
        base = np.asarray(cell[::-1])  # itertools gives slowest axis first
        corner = lambda offs: int(((base + np.asarray(offs)) * stride).sum())
        if dim == 2:
            a, b, c, d = corner((0, 0)), corner((1, 0)), corner((0, 1)), corner((1, 1))
            faces += [(a, b, c), (b, d, c)]
        else:
            for perm in itertools.permutations(range(3)):
                off = np.zeros(3, dtype=int)
                tet = [corner(off)]
                for ax in perm:
                    off[ax] = 1
                    tet.append(corner(off))
                faces.append(tuple(tet))
    faces = np.array(faces, dtype=np.int32).reshape(-1, dim + 1)
    return SimplicialMesh(coords, faces)


def random_mesh(dim: int, n: int, rng: np.random.Generator) -> SimplicialMesh:
    """Delaunay triangulation of ``n`` uniform points in the unit box."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    coords = rng.random((n, dim))
    try:
        faces = Delaunay(coords).simplices.astype(np.int32)
    except (QhullError, ValueError):
        faces = np.empty((0, dim + 1), dtype=np.int32)
    return SimplicialMesh(coords, faces)


def linear_flow(mesh: SimplicialMesh, matrix, t_horizon: float = 1.0) -> FlowMap:
    a = np.asarray(matrix, dtype=np.float64)
    if a.shape != (mesh.dim, mesh.dim):
        raise ValidationError(f"matrix must be {mesh.dim}x{mesh.dim}, got shape {a.shape}")
    return FlowMap(mesh.coords @ a.T, t_horizon)


def identity_flow(mesh: SimplicialMesh, t_horizon: float = 1.0) -> FlowMap:
    return FlowMap(mesh.coords.copy(), t_horizon)


def random_flow(mesh: SimplicialMesh, rng: np.random.Generator, scale: float = 0.1,
                t_horizon: float = 1.0) -> FlowMap:
    return FlowMap(mesh.coords + scale * rng.normal(size=mesh.coords.shape), t_horizon)
