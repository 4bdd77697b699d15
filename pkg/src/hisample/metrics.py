"""Chain-preservation rate and node-aggregation variance diagnostics.

A chain is a simple path on four distinct nodes whose degrees (in the parent
graph) all stay at or below a cap k. The preservation rate over a batch of
subgraphs is the fraction of such chains whose four nodes land together in at
least one subgraph; node-induced closure then guarantees the three path
edges come along.

The variance diagnostic runs a fixed-weight reference forward pass on every
subgraph and measures, per node, how much the final embedding norm moves
across the subgraphs containing that node.
"""

import multiprocessing as mp
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError


@dataclass
class ChainSet:
    chains: np.ndarray  # (C, 4), canonical orientation: first node < last node
    population: int     # exact |P_G(k)| even when subsampled
    exhaustive: bool


def count_chains(graph, k):
    """Exact |P_G(k)| without materializing the chains."""
    deg = graph.degrees
    total = 0
    for b, c in graph.edge_array():
        if deg[b] > k or deg[c] > k:
            continue
        a_side = graph.neighbors(b)
        a_side = a_side[(deg[a_side] <= k) & (a_side != c)]
        d_side = graph.neighbors(c)
        d_side = d_side[(deg[d_side] <= k) & (d_side != b)]
        total += len(a_side) * len(d_side) - np.intersect1d(
            a_side, d_side, assume_unique=True).size
    return int(total)


def enumerate_chains(graph, k, cap=10 ** 8, subsample_size=10 ** 6, seed=0):
    """All degree-capped 4-node chains, one canonical tuple per chain.

    Enumeration crosses the eligible neighbors of each eligible middle edge.
    When the population would exceed ``cap``, a uniform subsample of
    ``subsample_size`` chains is returned instead (flagged in the result).
    """
    if k < 1:
        raise ParameterError(f"degree cap must be >= 1, got {k}")
    deg = graph.degrees
    population = count_chains(graph, k)
    if population > cap:
        return _subsample_chains(graph, k, population, subsample_size, seed)
    rows = []
    for b, c in graph.edge_array():
        if deg[b] > k or deg[c] > k:
            continue
        a_side = graph.neighbors(b)
        a_side = a_side[(deg[a_side] <= k) & (a_side != c)]
        d_side = graph.neighbors(c)
        d_side = d_side[(deg[d_side] <= k) & (d_side != b)]
        if len(a_side) == 0 or len(d_side) == 0:
            continue
        a = np.repeat(a_side, len(d_side))
        d = np.tile(d_side, len(a_side))
        keep = a != d
        a, d = a[keep], d[keep]
        chunk = np.column_stack([a, np.full_like(a, b), np.full_like(a, c), d])
        flip = chunk[:, 0] > chunk[:, 3]
        chunk[flip] = chunk[flip, ::-1]
        rows.append(chunk)
    chains = np.concatenate(rows) if rows else np.zeros((0, 4), dtype=np.int64)
    return ChainSet(chains=chains, population=population, exhaustive=True)


def _subsample_chains(graph, k, population, size, seed):
    """Uniform chain subsample by rejection on (middle edge, endpoint pair)."""
    rng = np.random.default_rng(seed)
    deg = graph.degrees
    edges = graph.edge_array()
    ok = (deg[edges[:, 0]] <= k) & (deg[edges[:, 1]] <= k)
    edges = edges[ok]
    sides = []
    weights = np.zeros(len(edges), dtype=np.float64)
    for i, (b, c) in enumerate(edges):
        a_side = graph.neighbors(b)
        a_side = a_side[(deg[a_side] <= k) & (a_side != c)]
        d_side = graph.neighbors(c)
        d_side = d_side[(deg[d_side] <= k) & (d_side != b)]
        sides.append((a_side, d_side))
        weights[i] = len(a_side) * len(d_side)
    probs = weights / weights.sum()
    seen = set()
    out = np.empty((size, 4), dtype=np.int64)
    filled = 0
    while filled < size:
        draw = rng.choice(len(edges), size=size, p=probs)
        for i in draw:
            a_side, d_side = sides[i]
            a = int(a_side[rng.integers(len(a_side))])
            d = int(d_side[rng.integers(len(d_side))])
            if a == d:
                continue
            b, c = int(edges[i, 0]), int(edges[i, 1])
            tup = (a, b, c, d) if a < d else (d, c, b, a)
            if tup in seen:
                continue
            seen.add(tup)
            out[filled] = tup
            filled += 1
            if filled == size:
                break
    return ChainSet(chains=out, population=population, exhaustive=False)


@dataclass
class ChainReport:
    k: int
    n: int
    total_chains: int
    preserved: int
    rate: float
    rates_by_n: np.ndarray
    exhaustive: bool = True
    population: int | None = None


def chain_preservation_rate(graph, k, subgraphs, chain_set=None):
    """Fraction of P_G(k) chains landing whole in at least one subgraph.

    Only chains not yet preserved are rechecked against each next subgraph,
    so the per-n rate curve comes out of the same pass.
    """
    if chain_set is None:
        chain_set = enumerate_chains(graph, k)
    chains = chain_set.chains
    total = len(chains)
    if total == 0:
        raise ParameterError(f"no chains with degree cap {k}; rate undefined")
    active = np.arange(total)
    rates = np.empty(len(subgraphs))
    member = np.zeros(graph.node_count, dtype=bool)
    for i, sg in enumerate(subgraphs):
        if len(active):
            member[:] = False
            member[sg.global_ids] = True
            hit = member[chains[active]].all(axis=1)
            active = active[~hit]
        rates[i] = 1.0 - len(active) / total
    preserved = total - len(active)
    return ChainReport(k=k, n=len(subgraphs), total_chains=total,
                       preserved=preserved, rate=preserved / total,
                       rates_by_n=rates, exhaustive=chain_set.exhaustive,
                       population=chain_set.population)


@dataclass
class ForwardConfig:
    layers: int = 2
    hidden_dim: int = 64
    weight_seed: int = 0

    def __post_init__(self):
        if self.layers < 1:
            raise ParameterError(f"layers must be >= 1, got {self.layers}")


def init_weights(feature_dim, config):
    """Per-layer weight matrices, uniform in [-a, a] with a = sqrt(6/(fin+fout)),
    drawn once from weight_seed and reused for every subgraph."""
    rng = np.random.default_rng(config.weight_seed)
    dims = [feature_dim] + [config.hidden_dim] * config.layers
    weights = []
    for fin, fout in zip(dims[:-1], dims[1:]):
        a = np.sqrt(6.0 / (fin + fout))
        weights.append(rng.uniform(-a, a, size=(fin, fout)).astype(np.float32))
    return weights


def _normalized_adjacency(subgraph):
    n = subgraph.node_count
    adj = sp.csr_matrix(
        (np.ones(len(subgraph.indices), dtype=np.float64),
         subgraph.indices, subgraph.indptr), shape=(n, n))
    adj = adj + sp.identity(n, format="csr")
    dinv = 1.0 / np.sqrt(np.asarray(adj.sum(axis=1)).ravel())
    return sp.diags(dinv) @ adj @ sp.diags(dinv)


def forward_pass(subgraph, features, config, weights=None):
    """Deterministic reference propagation on the subgraph's own normalized
    adjacency; returns the 2-norm of each node's final embedding.

    ``features`` holds the rows for the subgraph's nodes (local order).
    ``weights`` overrides the seeded initialization (test hook).
    """
    features = np.asarray(features)
    if features.ndim != 2 or features.shape[0] != subgraph.node_count:
        raise ParameterError(
            f"features must be ({subgraph.node_count}, f), got {features.shape}")
    if weights is None:
        weights = init_weights(features.shape[1], config)
    a_hat = _normalized_adjacency(subgraph)
    h = features.astype(np.float64)
    for w in weights:
        h = a_hat @ (h @ w.astype(np.float64))
        h = np.maximum(h, 0.0)
    return np.linalg.norm(h, axis=1)


@dataclass
class VarianceReport:
    per_node_var: np.ndarray
    var_avg: float
    appearance_counts: np.ndarray
    var_avg_by_n: np.ndarray | None = None


_F_SUBS = _F_FEATURES = _F_CONFIG = _F_WEIGHTS = None


def _init_forward_worker(subgraphs, features, config, weights):
    global _F_SUBS, _F_FEATURES, _F_CONFIG, _F_WEIGHTS
    _F_SUBS, _F_FEATURES, _F_CONFIG, _F_WEIGHTS = subgraphs, features, config, weights


def _forward_index(i):
    sg = _F_SUBS[i]
    return forward_pass(sg, _F_FEATURES[sg.global_ids], _F_CONFIG, _F_WEIGHTS)


def aggregation_variance(graph, subgraphs, config, features=None, track_curve=False,
                         workers=1):
    """Per-node variance of the forward-pass output norm across the
    subgraphs containing the node (population variance, divisor k).

    Nodes never sampled contribute zero to the average, which divides by the
    full node count; appearance counts are reported so callers can filter.
    Forward passes are independent; with workers > 1 they run in a fork pool
    and the variance accumulation merges them in deterministic input order.
    """
    if features is None:
        features = graph.features
    if features is None:
        raise ParameterError("graph has no features; pass a feature matrix")
    if len(subgraphs) == 0:
        raise ParameterError("need at least one subgraph")
    weights = init_weights(features.shape[1], config)
    if workers > 1 and len(subgraphs) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_init_forward_worker,
                      initargs=(subgraphs, features, config, weights)) as pool:
            outputs = pool.map(_forward_index, range(len(subgraphs)))
    else:
        outputs = (forward_pass(sg, features[sg.global_ids], config, weights)
                   for sg in subgraphs)
    n = graph.node_count
    count = np.zeros(n, dtype=np.int64)
    mean = np.zeros(n)
    m2 = np.zeros(n)  # Welford accumulator: exact zeros for constant samples
    curve = np.empty(len(subgraphs)) if track_curve else None

    for i, (sg, y) in enumerate(zip(subgraphs, outputs)):
        ids = sg.global_ids
        count[ids] += 1
        delta = y - mean[ids]
        mean[ids] += delta / count[ids]
        m2[ids] += delta * (y - mean[ids])
        if track_curve:
            curve[i] = (m2 / np.maximum(count, 1)).sum() / n
    per_node = m2 / np.maximum(count, 1)
    return VarianceReport(per_node_var=per_node, var_avg=float(per_node.sum() / n),
                          appearance_counts=count, var_avg_by_n=curve)
