"""Edge curvature: closed-form localized lower bound and exact optimal
transport value.

The exact value treats each endpoint's neighborhood as a uniform probability
measure and solves the 1-Wasserstein transport between the two measures with
ground distances capped at 3 (for the neighborhoods of an existing edge the
true shortest path never exceeds 3, so the cap is lossless). Masses are
scaled by lcm(d_u, d_v) to integers and the transport optimum is computed by
integer min-cost flow, so the returned value is an exact rational reported as
float.
"""

import math
import multiprocessing as mp
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractError, ParameterError
from .mincostflow import solve_transport

EXACT_DEGREE_GUARD = 10_000  # transport instance is d_u x d_v cells


def triangle_count(graph, u, v):
    """Number of triangles through edge (u, v): |N(u) ∩ N(v)|."""
    return int(np.intersect1d(graph.neighbors(u), graph.neighbors(v),
                              assume_unique=True).size)


def localized_curvature_bound(graph, u, v):
    """Closed-form lower bound on the edge's curvature from endpoint degrees
    and the edge's triangle count."""
    if not graph.has_edge(u, v):
        raise ContractError(f"edge ({u}, {v}) does not exist")
    du, dv = graph.degree(u), graph.degree(v)
    tri = triangle_count(graph, u, v)
    slack = 1.0 - 1.0 / du - 1.0 / dv
    lo, hi = min(du, dv), max(du, dv)
    return (-max(slack - tri / lo, 0.0)
            - max(slack - tri / hi, 0.0)
            + tri / hi)


def local_distance(graph, p, q, cap=3):
    """Shortest-path distance between p and q, capped at ``cap`` (BFS)."""
    if p == q:
        return 0
    seen = {p}
    frontier = [p]
    for depth in range(1, cap + 1):
        nxt = []
        for x in frontier:
            for y in graph.neighbors(x):
                y = int(y)
                if y == q:
                    return depth
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return cap


def _neighbor_sets(graph, nodes):
    return {int(p): set(graph.neighbors(p).tolist()) for p in nodes}


def _cost_matrix(graph, nu, nv, nbr_sets=None):
    """Capped pairwise distances between the two neighborhoods.

    d = 0 on identical nodes, 1 on adjacent ones, 2 with a common neighbor,
    else 3 (path through the shared edge).
    """
    if nbr_sets is None:
        nbr_sets = _neighbor_sets(graph, np.union1d(nu, nv))
    cost = np.full((len(nu), len(nv)), 3, dtype=np.int64)
    for i, p in enumerate(nu):
        sp = nbr_sets[int(p)]
        for j, q in enumerate(nv):
            q = int(q)
            if p == q:
                cost[i, j] = 0
            elif q in sp:
                cost[i, j] = 1
            elif not sp.isdisjoint(nbr_sets[q]):
                cost[i, j] = 2
    return cost


def exact_orc(graph, u, v, force=False, return_plan=False, _nbr_sets=None):
    """Exact curvature of an existing edge: 1 - W1(mu_u, mu_v).

    mu_x puts mass 1/d_x on each neighbor of x. With ``return_plan`` the
    optimal plan is returned as (scale, integer plan matrix, nu, nv) where
    plan / scale are the transported masses.
    """
    if not graph.has_edge(u, v):
        raise ContractError(f"edge ({u}, {v}) does not exist")
    du, dv = graph.degree(u), graph.degree(v)
    if max(du, dv) > EXACT_DEGREE_GUARD and not force:
        raise ParameterError(
            f"endpoint degree {max(du, dv)} exceeds {EXACT_DEGREE_GUARD}; "
            "pass force=True to solve the large transport instance anyway")
    nu, nv = graph.neighbors(u), graph.neighbors(v)
    cost = _cost_matrix(graph, nu, nv, _nbr_sets)
    scale = math.lcm(du, dv)
    supplies = np.full(du, scale // du, dtype=np.int64)
    demands = np.full(dv, scale // dv, dtype=np.int64)
    total_cost, plan = solve_transport(supplies, demands, cost)
    kappa = 1 - Fraction(int(total_cost), scale)
    if return_plan:
        return float(kappa), (scale, plan, nu, nv)
    return float(kappa)


# --- batch evaluation -------------------------------------------------------

_W_GRAPH = None
_W_MODE = None
_W_SETS = None
_W_FORCE = False


def _init_worker(graph, mode, force=False):
    global _W_GRAPH, _W_MODE, _W_SETS, _W_FORCE
    _W_GRAPH = graph
    _W_MODE = mode
    _W_SETS = None
    _W_FORCE = force


def _edge_value(edge):
    global _W_SETS
    u, v = map(int, edge)
    if _W_MODE == "localized":
        return localized_curvature_bound(_W_GRAPH, u, v)
    if _W_SETS is None:
        _W_SETS = _neighbor_sets(_W_GRAPH, np.arange(_W_GRAPH.node_count))
    return exact_orc(_W_GRAPH, u, v, force=_W_FORCE, _nbr_sets=_W_SETS)


def edge_curvatures(graph, edges=None, mode="exact", workers=1, force=False):
    """Curvature for each edge (default: every edge of the graph).

    Per-edge work is independent; with workers > 1 the edges are evaluated
    by a fork pool sharing the read-only graph.
    """
    if mode not in ("exact", "localized"):
        raise ParameterError(f"mode must be 'exact' or 'localized', got {mode!r}")
    edges = graph.edge_array() if edges is None else np.asarray(edges, dtype=np.int64)
    if workers > 1 and len(edges) > 64:
        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_init_worker, initargs=(graph, mode, force)) as pool:
            values = pool.map(_edge_value, list(edges), chunksize=max(1, len(edges) // (8 * workers)))
        return edges, np.asarray(values)
    _init_worker(graph, mode, force)
    return edges, np.asarray([_edge_value(e) for e in edges])


@dataclass
class CurvatureReport:
    mode: str
    scope: str
    mean: float
    edge_count: int
    edges: np.ndarray
    values: np.ndarray


def average_curvature(graph, mode="exact", subgraphs=None, per_subgraph_mean=False,
                      workers=1, force=False):
    """Mean edge curvature, measured on the parent graph.

    Original-graph scope averages every edge once. Subgraph scope pools the
    parent-graph curvatures of every subgraph's edges (each occurrence
    counts), or averages per-subgraph means when ``per_subgraph_mean`` is
    set; zero-edge subgraphs are skipped.
    """
    if subgraphs is None:
        edges, values = edge_curvatures(graph, mode=mode, workers=workers, force=force)
        if len(edges) == 0:
            raise ParameterError("graph has no edges to average over")
        return CurvatureReport(mode=mode, scope="graph", mean=float(values.mean()),
                               edge_count=len(edges), edges=edges, values=values)

    parent_edges = graph.edge_array()
    keys = parent_edges[:, 0] * graph.node_count + parent_edges[:, 1]
    occurrence = np.zeros(len(keys), dtype=np.int64)
    per_sg_positions = []
    for sg in subgraphs:
        ge = sg.edge_array(global_ids=True)
        if len(ge) == 0:
            per_sg_positions.append(None)
            continue
        pos = np.searchsorted(keys, ge[:, 0] * graph.node_count + ge[:, 1])
        occurrence[pos] += 1
        per_sg_positions.append(pos)
    used = np.flatnonzero(occurrence)
    if len(used) == 0:
        raise ParameterError("no subgraph contributed any edge")
    _, values = edge_curvatures(graph, parent_edges[used], mode=mode, workers=workers,
                                force=force)
    value_by_pos = np.full(len(keys), np.nan)
    value_by_pos[used] = values
    if per_subgraph_mean:
        means = [value_by_pos[pos].mean() for pos in per_sg_positions if pos is not None]
        mean = float(np.mean(means))
    else:
        mean = float((value_by_pos[used] * occurrence[used]).sum() / occurrence.sum())
    return CurvatureReport(mode=mode, scope="subgraphs", mean=mean,
                           edge_count=int(occurrence.sum()),
                           edges=parent_edges[used], values=values)
