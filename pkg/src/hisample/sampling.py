"""Subgraph samplers and the sampling-frequency bookkeeping.

The two hierarchical samplers traverse the periphery only (weighted toward
high-norm, low-degree neighbors) and pull in a fraction gamma of each visited
node's core neighbors (weighted toward high-norm, high-degree ones). Baseline
samplers (edge sampling, plain random walks, uniform nodes) share the same
Subgraph output so the diagnostics can compare them directly.

Every draw comes from an RNG stream derived from (seed, subgraph index), so
sampling n subgraphs in parallel or serially yields identical output.
"""

import math
import multiprocessing as mp
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ParameterError
from .graph import induced_subgraph

METHODS = ("his-ff", "his-rw", "saint-edge", "saint-rw", "uniform-node")

GAMMA_LARGE_GRAPH_NODES = 100_000  # above this, default gamma drops to 0.4


@dataclass
class SamplerConfig:
    method: str = "his-ff"
    sample_size: int | None = None
    sampling_rate: float | None = None
    gamma: float | None = None  # None -> 0.4 on graphs over 100k nodes, else 1.0
    walk_length: int = 2
    geometric_p: float = 0.5
    roots: int | None = None
    edge_budget: int | None = None
    seed: int = 0
    track_provenance: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.gamma is not None and not 0 < self.gamma <= 1:
            raise ParameterError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0 < self.geometric_p < 1:
            raise ParameterError(f"geometric_p must be in (0, 1), got {self.geometric_p}")
        if self.sampling_rate is not None and not 0 < self.sampling_rate <= 1:
            raise ParameterError(f"sampling rate must be in (0, 1], got {self.sampling_rate}")
        if self.walk_length < 0:
            raise ParameterError(f"walk length must be >= 0, got {self.walk_length}")

    def resolve_sample_size(self, graph):
        if self.sample_size is not None:
            size = int(self.sample_size)
        elif self.sampling_rate is not None:
            size = int(graph.node_count * self.sampling_rate)
        else:
            raise ParameterError("need sample_size or sampling_rate")
        if size < 1:
            raise ParameterError(f"sample size must be >= 1, got {size}")
        if size > graph.node_count:
            raise ParameterError(f"sample size {size} exceeds node count {graph.node_count}")
        return size

    def resolve_gamma(self, graph):
        if self.gamma is not None:
            return self.gamma
        return 0.4 if graph.node_count > GAMMA_LARGE_GRAPH_NODES else 1.0


def subgraph_rng(seed, index):
    """Independent RNG stream for subgraph ``index`` under a run seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def round_half_up(x):
    return int(math.floor(x + 0.5))


def weighted_sample_without_replacement(rng, ids, weights, k):
    """Draw k distinct ids by successive renormalized weighted draws.

    k is capped at the support size. A zero-weight support falls back to
    uniform draws so callers never divide by zero.
    """
    n = len(ids)
    k = min(int(k), n)
    if k <= 0:
        return ids[:0]
    if k == n:
        return ids
    w = np.asarray(weights, dtype=np.float64).copy()
    alive = np.arange(n)
    picked = np.empty(k, dtype=np.int64)
    for i in range(k):
        total = w.sum()
        if total <= 0:
            j = rng.integers(len(alive))
        else:
            j = rng.choice(len(alive), p=w / total)
        picked[i] = alive[j]
        alive = np.delete(alive, j)
        w = np.delete(w, j)
    return ids[picked]


def _split_neighbors(graph, part, v):
    nb = graph.neighbors(v)
    core = part.is_core[nb]
    return nb[core], nb[~core]


def periphery_weights(graph, part, v, exclusions=()):
    """Distribution over v's eligible periphery neighbors, weight
    ||X(u)|| / sqrt(d_u + 1), normalized to sum 1. Empty arrays signal an
    empty support."""
    if part.is_core[v]:
        raise ContractError(f"node {v} is a core node")
    _, per = _split_neighbors(graph, part, v)
    if len(exclusions):
        excl = exclusions if isinstance(exclusions, np.ndarray) else np.fromiter(exclusions, dtype=np.int64)
        per = per[~np.isin(per, excl)]
    if len(per) == 0:
        return per, np.zeros(0)
    w = graph.feature_norms[per] / np.sqrt(graph.degrees[per] + 1.0)
    total = w.sum()
    probs = w / total if total > 0 else np.full(len(per), 1.0 / len(per))
    return per, probs


def core_weights(graph, part, v):
    """Distribution over v's core neighbors, weight ||X(u)|| * sqrt(d_u + 1),
    normalized. Empty when v has no core neighbor."""
    if part.is_core[v]:
        raise ContractError(f"node {v} is a core node")
    core, _ = _split_neighbors(graph, part, v)
    if len(core) == 0:
        return core, np.zeros(0)
    w = graph.feature_norms[core] * np.sqrt(graph.degrees[core] + 1.0)
    total = w.sum()
    probs = w / total if total > 0 else np.full(len(core), 1.0 / len(core))
    return core, probs


def _draw_uniform_excluded(rng, candidates, blocked, max_rejects=64):
    """Uniform draw from candidates with blocked[c] False, or -1 if none.

    Rejection sampling stays exact and O(1) while most candidates are free;
    near exhaustion it falls back to materializing the eligible set once.
    """
    for _ in range(max_rejects):
        c = candidates[rng.integers(len(candidates))]
        if not blocked[c]:
            return int(c)
    free = candidates[~blocked[candidates]]
    if len(free) == 0:
        return -1
    return int(free[rng.integers(len(free))])


def sample_his_ff(graph, part, config, index=0):
    """Forest-fire style hierarchical sampler.

    A FIFO queue burns through the periphery: each dequeued node joins the
    sample, a rounded gamma-fraction of its core neighbors is drawn in by the
    core weighting, and a geometric number of its unvisited periphery
    neighbors is enqueued by the periphery weighting. Fresh uniform seeds
    restart the fire whenever the queue dies out.
    """
    n_hat = config.resolve_sample_size(graph)
    gamma = config.resolve_gamma(graph)
    if part.periphery_count == 0:
        raise ParameterError("periphery is empty; hierarchical sampling undefined")
    rng = subgraph_rng(config.seed, index)
    deg = graph.degrees
    norms = graph.feature_norms
    w_core = norms * np.sqrt(deg + 1.0)
    w_per = norms / np.sqrt(deg + 1.0)
    per_nodes = part.periphery_nodes()

    in_sub = np.zeros(graph.node_count, dtype=bool)
    in_queue = np.zeros(graph.node_count, dtype=bool)
    queue = deque()
    n_sub = 0
    truncated = False
    prov_periphery, prov_core = [], []

    while n_sub < n_hat:
        if not queue:
            seed = _draw_uniform_excluded(rng, per_nodes, in_sub)
            if seed < 0:
                truncated = True
                break
            queue.append(seed)
            in_queue[seed] = True
        v = queue.popleft()
        in_queue[v] = False
        in_sub[v] = True
        n_sub += 1
        prov_periphery.append(v)

        core_nb, per_nb = _split_neighbors(graph, part, v)
        t = round_half_up(gamma * len(core_nb))
        if t > 0:
            for u in weighted_sample_without_replacement(rng, core_nb, w_core[core_nb], t):
                if not in_sub[u]:
                    in_sub[u] = True
                    n_sub += 1
                    prov_core.append(int(u))

        s = int(rng.geometric(1.0 - config.geometric_p))
        if n_sub + len(queue) < n_hat:
            eligible = per_nb[~(in_sub[per_nb] | in_queue[per_nb])]
            for u in weighted_sample_without_replacement(rng, eligible, w_per[eligible], s):
                queue.append(int(u))
                in_queue[u] = True

    provenance = None
    if config.track_provenance:
        provenance = {"periphery": sorted(prov_periphery), "core": sorted(prov_core)}
    return induced_subgraph(graph, np.flatnonzero(in_sub),
                            truncated=truncated, provenance=provenance)


def sample_his_rw(graph, part, config, index=0):
    """Random-walk style hierarchical sampler.

    Walks of h+1 positions start at uniform periphery seeds and step through
    periphery neighbors only; each first visit pulls in the gamma-fraction of
    core neighbors. Dead ends truncate the walk and trigger a new seed.
    """
    n_hat = config.resolve_sample_size(graph)
    gamma = config.resolve_gamma(graph)
    if part.periphery_count == 0:
        raise ParameterError("periphery is empty; hierarchical sampling undefined")
    if config.walk_length < 1:
        raise ParameterError("his-rw needs walk_length >= 1")
    rng = subgraph_rng(config.seed, index)
    deg = graph.degrees
    norms = graph.feature_norms
    w_core = norms * np.sqrt(deg + 1.0)
    w_per = norms / np.sqrt(deg + 1.0)
    per_nodes = part.periphery_nodes()
    h = config.walk_length

    in_sub = np.zeros(graph.node_count, dtype=bool)
    n_sub = 0
    periphery_visited = 0
    truncated = False
    prov_periphery, prov_core = [], []

    while n_sub < n_hat:
        if periphery_visited == part.periphery_count:
            # every periphery node already sampled: no walk can add anything
            truncated = True
            break
        v = int(per_nodes[rng.integers(len(per_nodes))])
        for d in range(1, h + 2):
            if not in_sub[v]:
                core_nb, _ = _split_neighbors(graph, part, v)
                t = round_half_up(gamma * len(core_nb))
                if t > 0:
                    for u in weighted_sample_without_replacement(rng, core_nb, w_core[core_nb], t):
                        if not in_sub[u]:
                            in_sub[u] = True
                            n_sub += 1
                            prov_core.append(int(u))
                in_sub[v] = True
                n_sub += 1
                periphery_visited += 1
                prov_periphery.append(v)
            if d < h + 1:
                _, per_nb = _split_neighbors(graph, part, v)
                if len(per_nb) == 0:
                    break
                w = w_per[per_nb]
                total = w.sum()
                probs = w / total if total > 0 else None
                v = int(rng.choice(per_nb, p=probs))

    provenance = None
    if config.track_provenance:
        provenance = {"periphery": sorted(prov_periphery), "core": sorted(prov_core)}
    return induced_subgraph(graph, np.flatnonzero(in_sub),
                            truncated=truncated, provenance=provenance)


def sample_saint_edge(graph, config, index=0):
    """Edge sampler: draw edge_budget edges with replacement, probability
    proportional to 1/d_u + 1/d_v, induce on the endpoint set."""
    if not config.edge_budget or config.edge_budget < 1:
        raise ParameterError("saint-edge needs edge_budget >= 1")
    rng = subgraph_rng(config.seed, index)
    e = graph.edge_array()
    deg = graph.degrees.astype(np.float64)
    w = 1.0 / deg[e[:, 0]] + 1.0 / deg[e[:, 1]]
    idx = rng.choice(len(e), size=config.edge_budget, replace=True, p=w / w.sum())
    return induced_subgraph(graph, e[idx].ravel())


def sample_saint_rw(graph, config, index=0):
    """Random-walk sampler: uniform roots, h uniform-neighbor hops each,
    induce on all visited nodes."""
    if not config.roots or config.roots < 1:
        raise ParameterError("saint-rw needs roots >= 1")
    rng = subgraph_rng(config.seed, index)
    visited = []
    for _ in range(config.roots):
        v = int(rng.integers(graph.node_count))
        visited.append(v)
        for _ in range(config.walk_length):
            nb = graph.neighbors(v)
            if len(nb) == 0:
                break
            v = int(nb[rng.integers(len(nb))])
            visited.append(v)
    return induced_subgraph(graph, visited)


def sample_uniform_node(graph, config, index=0):
    """Control baseline: sample_size distinct nodes uniformly, induce."""
    n_hat = config.resolve_sample_size(graph)
    rng = subgraph_rng(config.seed, index)
    nodes = rng.choice(graph.node_count, size=n_hat, replace=False)
    return induced_subgraph(graph, nodes)


def sample_subgraph(graph, part, config, index=0):
    """Dispatch a single draw by config.method."""
    if config.method == "his-ff":
        return sample_his_ff(graph, part, config, index)
    if config.method == "his-rw":
        return sample_his_rw(graph, part, config, index)
    if config.method == "saint-edge":
        return sample_saint_edge(graph, config, index)
    if config.method == "saint-rw":
        return sample_saint_rw(graph, config, index)
    if config.method == "uniform-node":
        return sample_uniform_node(graph, config, index)
    raise ParameterError(f"unknown method {config.method!r}")


_P_GRAPH = _P_PART = _P_CONFIG = None


def _init_sample_worker(graph, part, config):
    global _P_GRAPH, _P_PART, _P_CONFIG
    _P_GRAPH, _P_PART, _P_CONFIG = graph, part, config


def _sample_index(index):
    return sample_subgraph(_P_GRAPH, _P_PART, _P_CONFIG, index)


def sample_subgraphs(graph, part, config, count, start_index=0, workers=1):
    """Draw ``count`` subgraphs; each index gets its own RNG stream, so a
    fork pool produces exactly the same set as the serial loop."""
    indices = list(range(start_index, start_index + count))
    if workers > 1 and count > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_init_sample_worker,
                      initargs=(graph, part, config)) as pool:
            return pool.map(_sample_index, indices)
    return [sample_subgraph(graph, part, config, i) for i in indices]


def saint_rw_roots_for_target(graph, target_nodes, walk_length, seed=0, trials=5):
    """Root count whose mean visited-node count lands near target_nodes."""

    def mean_size(r):
        cfg = SamplerConfig(method="saint-rw", roots=r, walk_length=walk_length, seed=seed)
        return np.mean([sample_saint_rw(graph, cfg, i).node_count for i in range(trials)])

    lo, hi = 1, max(2, math.ceil(target_nodes / (walk_length + 1)))
    while mean_size(hi) < target_nodes and hi < graph.node_count:
        lo, hi = hi, min(hi * 2, graph.node_count)
    while lo < hi:
        mid = (lo + hi) // 2
        if mean_size(mid) < target_nodes:
            lo = mid + 1
        else:
            hi = mid
    return lo


def saint_edge_budget_for_target(graph, target_nodes, seed=0, trials=5):
    """Edge budget whose mean endpoint-set size lands near target_nodes."""

    def mean_size(b):
        cfg = SamplerConfig(method="saint-edge", edge_budget=b, seed=seed)
        return np.mean([sample_saint_edge(graph, cfg, i).node_count for i in range(trials)])

    lo, hi = 1, max(2, target_nodes // 2)
    while mean_size(hi) < target_nodes and hi < 4 * graph.edge_count:
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mean_size(mid) < target_nodes:
            lo = mid + 1
        else:
            hi = mid
    return lo


@dataclass
class FrequencyCounters:
    """Appearance counts over a batch of subgraphs from one parent graph.

    ``edge_keys`` aligns with the parent's edge_array() ordering, so
    edge_counts[i] counts occurrences of parent edge i.
    """

    n_subgraphs: int
    node_counts: np.ndarray
    edge_counts: np.ndarray
    edge_keys: np.ndarray


@dataclass
class NormCoefficients:
    """Loss and aggregation normalization derived from counters.

    lambda_v = C_v / n; nodes never sampled are flagged in ``unseen`` and get
    lambda 0. alpha for edge (u, v) with u < v is C_uv / C_v, NaN where the
    edge was never sampled.
    """

    lambda_v: np.ndarray
    alpha_uv: np.ndarray
    edge_keys: np.ndarray
    unseen: np.ndarray


def accumulate_frequencies(graph, subgraphs):
    """Count node and edge appearances across subgraphs (C_v and C_uv)."""
    node_counts = np.zeros(graph.node_count, dtype=np.int64)
    edges = graph.edge_array()
    keys = edges[:, 0] * graph.node_count + edges[:, 1]
    edge_counts = np.zeros(len(edges), dtype=np.int64)
    for sg in subgraphs:
        node_counts[sg.global_ids] += 1
        ge = sg.edge_array(global_ids=True)
        if len(ge) == 0:
            continue
        k = ge[:, 0] * graph.node_count + ge[:, 1]
        pos = np.searchsorted(keys, k)
        if pos.max(initial=-1) >= len(keys) or not np.array_equal(keys[pos], k):
            raise ContractError("subgraph contains an edge missing from the parent graph")
        edge_counts[pos] += 1
    return FrequencyCounters(n_subgraphs=len(subgraphs), node_counts=node_counts,
                             edge_counts=edge_counts, edge_keys=edges)


def compute_norm_coefficients(counters):
    n = counters.n_subgraphs
    if n < 1:
        raise ParameterError("need at least one subgraph")
    lam = counters.node_counts / n
    unseen = counters.node_counts == 0
    c_v = counters.node_counts[counters.edge_keys[:, 1]]
    with np.errstate(invalid="ignore", divide="ignore"):
        alpha = np.where(counters.edge_counts > 0,
                         counters.edge_counts / np.maximum(c_v, 1), np.nan)
    return NormCoefficients(lambda_v=lam, alpha_uv=alpha,
                            edge_keys=counters.edge_keys, unseen=unseen)
