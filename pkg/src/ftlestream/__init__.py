"""Decoupled FTLE computation on simplicial meshes plus an accelerator performance model."""

__version__ = "0.1.0"

from .errors import FormatError, FtleError, ValidationError
from .mesh import (
    AdjacencyList,
    FlowMap,
    NeighborList,
    SimplicialMesh,
    build_adjacency,
    precompute_neighbors,
    validate_neighbor_list,
)
from .io import load_field, load_flowmap, load_mesh, load_neighbors, save_field, save_flowmap, save_mesh, save_neighbors
from .kernel import (
    PointRecord,
    cauchy_green,
    compute_ftle_decoupled,
    compute_ftle_naive,
    ftle_from_lambda,
    gather_record,
    gradient,
    max_eigen_sym2,
    max_eigen_sym3,
)
from .pipeline import AcceleratorConfig, MemorySystem, estimate_runtime, naive_throughput, pipelined_throughput
from .perfmodel import CATALOG, feasibility_table, gflops, required_bandwidth
from .flops import audit_flops
