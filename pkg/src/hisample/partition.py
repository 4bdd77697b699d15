"""Degree-threshold core-periphery decomposition.

The threshold is the degree d maximizing the number of edges whose endpoint
degrees straddle d (one endpoint above, one at or below). Nodes above the
threshold form the core. A single histogram pass over the edges evaluates the
objective for every candidate threshold at once, so the whole partition costs
O(|E| + d_max).
"""

import time
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass
class CorePeripheryPartition:
    d_th: int
    is_core: np.ndarray
    core_count: int
    periphery_count: int
    core_edge_count: int
    periphery_edge_count: int
    vertical_edge_count: int
    degenerate: bool = False

    def core_nodes(self):
        return np.flatnonzero(self.is_core)

    def periphery_nodes(self):
        return np.flatnonzero(~self.is_core)


def vertical_counts_by_threshold(graph):
    """Vertical-edge count for every candidate threshold d = 1..d_max.

    An edge with endpoint degrees lo < hi straddles every d in [lo, hi-1],
    so a difference array accumulates all candidates in one pass.
    """
    deg = graph.degrees
    d_max = int(deg.max())
    e = graph.edge_array()
    lo = np.minimum(deg[e[:, 0]], deg[e[:, 1]])
    hi = np.maximum(deg[e[:, 0]], deg[e[:, 1]])
    diff = np.zeros(d_max + 2, dtype=np.int64)
    np.add.at(diff, lo, 1)
    np.add.at(diff, hi, -1)
    return np.cumsum(diff)[1:d_max + 1]  # index i -> count at threshold d = i+1


def compute_degree_threshold(graph):
    """Smallest d maximizing the straddling-edge count.

    When the objective is zero everywhere (regular graphs), returns d_max so
    the core is empty and the samplers fall back to pure periphery traversal.
    """
    if graph.edge_count == 0:
        raise ParameterError("degree threshold undefined on an edgeless graph")
    counts = vertical_counts_by_threshold(graph)
    if counts.max() == 0:
        return int(graph.degrees.max())
    return int(np.argmax(counts)) + 1


def partition_graph(graph, d_th):
    """Classify nodes by degree > d_th and count edge classes."""
    if d_th < 1:
        raise ParameterError(f"degree threshold must be >= 1, got {d_th}")
    deg = graph.degrees
    is_core = deg > d_th
    e = graph.edge_array()
    ends_core = is_core[e].sum(axis=1) if len(e) else np.zeros(0, dtype=np.int64)
    core_edges = int((ends_core == 2).sum())
    vertical = int((ends_core == 1).sum())
    periphery_edges = int((ends_core == 0).sum())
    core_count = int(is_core.sum())
    return CorePeripheryPartition(
        d_th=int(d_th),
        is_core=is_core,
        core_count=core_count,
        periphery_count=graph.node_count - core_count,
        core_edge_count=core_edges,
        periphery_edge_count=periphery_edges,
        vertical_edge_count=vertical,
        degenerate=core_count == 0,
    )


def partition(graph):
    """Threshold plus membership in one call, timed like the CLI does it."""
    t0 = time.process_time()
    part = partition_graph(graph, compute_degree_threshold(graph))
    return part, time.process_time() - t0


def partition_stats(part, graph, cpu_seconds):
    """Summary record: threshold, core ratio, vertical edge ratio, CPU time."""
    return {
        "d_th": part.d_th,
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "core_ratio": part.core_count / graph.node_count,
        "vertical_edge_ratio": part.vertical_edge_count / graph.edge_count,
        "cpu_seconds": cpu_seconds,
        "degenerate": part.degenerate,
    }
