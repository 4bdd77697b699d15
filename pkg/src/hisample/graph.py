"""Immutable undirected graph in compressed sparse adjacency form.

Everything downstream (partition, samplers, curvature, metrics) reads graphs
through this module. Construction cleans the input once: symmetrize, drop
self-loops, drop duplicate edges, densify node ids. After that the arrays are
write-locked and safe to share across worker processes.
"""

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ContractError, DimensionError, ParameterError, ParseError


def _locked(a):
    a.setflags(write=False)
    return a


@dataclass
class Graph:
    """Undirected attributed graph.

    ``indptr``/``indices`` form a CSR adjacency with neighbor lists sorted
    ascending. ``feature_norms`` caches the per-node feature 2-norm and is all
    ones when no features are attached, so samplers can always weight by it.
    ``external_ids`` maps dense internal ids back to the ids of the source
    file (identity when the graph was generated).
    """

    indptr: np.ndarray
    indices: np.ndarray
    features: np.ndarray | None = None
    labels: np.ndarray | None = None
    external_ids: np.ndarray | None = None
    feature_norms: np.ndarray = field(init=False)

    def __post_init__(self):
        self.indptr = _locked(np.asarray(self.indptr, dtype=np.int64))
        self.indices = _locked(np.asarray(self.indices, dtype=np.int64))
        if self.features is not None:
            self.features = _locked(np.asarray(self.features, dtype=np.float32))
            norms = np.linalg.norm(self.features.astype(np.float64), axis=1)
        else:
            norms = np.ones(self.node_count, dtype=np.float64)
        self.feature_norms = _locked(norms)
        if self.external_ids is not None:
            self.external_ids = _locked(np.asarray(self.external_ids, dtype=np.int64))
        self._edge_array = None

    @property
    def node_count(self):
        return len(self.indptr) - 1

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return i < len(nb) and nb[i] == v

    def edge_array(self):
        """All undirected edges as an (m, 2) array with u < v, lexsorted."""
        if self._edge_array is None:
            src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
            keep = src < self.indices
            self._edge_array = _locked(np.column_stack([src[keep], self.indices[keep]]))
        return self._edge_array


def from_edges(edges, node_count=None, **attrs):
    """Build a Graph from an iterable/array of (u, v) pairs.

    Symmetrizes, removes self-loops and duplicates. Node ids must already be
    dense 0-based; ``node_count`` defaults to max id + 1.
    """
    e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if node_count is None:
        node_count = int(e.max()) + 1 if len(e) else 0
    e = e[e[:, 0] != e[:, 1]]
    both = np.concatenate([e, e[:, ::-1]])
    both = np.unique(both, axis=0)
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.add.at(indptr, both[:, 0] + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Graph(indptr=indptr, indices=both[:, 1].copy(), **attrs)


def load_edge_list(path, drop_isolated=True):
    """Read a plain-text edge list (one ``u<sep>v`` pair per line).

    Separators: space, tab or comma. Lines starting with ``#`` are comments.
    Directed inputs are symmetrized, self-loops and multi-edges dropped, and
    node ids densified to 0..n-1 (original ids kept in ``external_ids``).
    With ``drop_isolated`` nodes left with degree zero after cleaning are
    removed entirely.
    """
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ParseError(f"expected two node ids, got {line!r}", lineno)
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ParseError(f"non-integer node id in {line!r}", lineno) from None
    if not pairs:
        raise ParseError(f"no edges found in {path}")
    raw = np.asarray(pairs, dtype=np.int64)
    clean = raw[raw[:, 0] != raw[:, 1]]
    if len(clean) == 0:
        raise ParseError(f"no edges left after cleaning in {path}")
    ids = np.unique(clean) if drop_isolated else np.unique(raw)
    dense = np.searchsorted(ids, clean)
    return from_edges(dense, node_count=len(ids), external_ids=ids)


def with_features(graph, features):
    """Return a copy of ``graph`` with ``features`` attached, norms recomputed."""
    features = np.asarray(features, dtype=np.float32)
    if features.ndim != 2 or features.shape[0] != graph.node_count:
        raise DimensionError(
            f"feature matrix has {features.shape[0] if features.ndim == 2 else '?'} rows, "
            f"graph has {graph.node_count} nodes"
        )
    return replace(graph, features=features)


def load_features(path, graph):
    """Attach node features from a CSV file or a raw binary dump.

    CSV: one row of floats per node. Binary: two little-endian int64 values
    (rows, cols) followed by row-major little-endian float32 data.
    """
    path = Path(path)
    if path.suffix in (".bin", ".dat", ".raw"):
        with open(path, "rb") as fh:
            header = np.fromfile(fh, dtype="<i8", count=2)
            if len(header) != 2:
                raise ParseError(f"truncated binary header in {path}")
            rows, cols = map(int, header)
            data = np.fromfile(fh, dtype="<f4", count=rows * cols)
        if data.size != rows * cols:
            raise ParseError(f"binary payload in {path} shorter than {rows}x{cols}")
        features = data.reshape(rows, cols)
    else:
        features = np.loadtxt(path, delimiter=",", dtype=np.float32, ndmin=2)
    return with_features(graph, features)


def load_labels(path, graph):
    """Attach labels: ``node_id,label`` rows (single-class) or one multi-hot
    row per node (multi-class)."""
    raw = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    if raw.shape[1] == 2 and raw.shape[0] <= graph.node_count:
        labels = np.full(graph.node_count, -1, dtype=np.int64)
        idx = raw[:, 0].astype(np.int64)
        if idx.min() < 0 or idx.max() >= graph.node_count:
            raise DimensionError("label node id out of range")
        labels[idx] = raw[:, 1].astype(np.int64)
    else:
        if raw.shape[0] != graph.node_count:
            raise DimensionError(
                f"label matrix has {raw.shape[0]} rows, graph has {graph.node_count} nodes"
            )
        labels = raw.astype(np.float32)
    return replace(graph, labels=_locked(labels))


def generate_ba(n, m, seed):
    """Scale-free graph by preferential attachment.

    Starts from a clique on m+1 nodes; every later node attaches m edges to
    distinct existing nodes drawn from the edge-endpoint multiset (urn draws
    make the preferential step O(1)). Deterministic for a fixed seed.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if n <= m:
        raise ParameterError(f"need n > m, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    urn = [v for e in edges for v in e]
    for source in range(m + 1, n):
        targets = set()
        while len(targets) < m:
            targets.add(urn[rng.integers(len(urn))])
        for t in targets:
            edges.append((source, t))
            urn.append(source)
            urn.append(t)
    return from_edges(edges, node_count=n)


@dataclass
class Subgraph:
    """Node-induced subgraph with local ids 0..k-1.

    ``global_ids`` is sorted ascending and maps local -> parent id; the local
    adjacency contains exactly the parent edges with both endpoints selected.
    ``truncated`` marks samples that ran out of eligible nodes before reaching
    their target size.
    """

    global_ids: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    truncated: bool = False
    provenance: dict | None = None

    def __post_init__(self):
        self.global_ids = _locked(np.asarray(self.global_ids, dtype=np.int64))
        self.indptr = _locked(np.asarray(self.indptr, dtype=np.int64))
        self.indices = _locked(np.asarray(self.indices, dtype=np.int64))

    @property
    def node_count(self):
        return len(self.global_ids)

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, local_v):
        return self.indices[self.indptr[local_v]:self.indptr[local_v + 1]]

    def to_local(self, global_ids):
        pos = np.searchsorted(self.global_ids, global_ids)
        return pos

    def edge_array(self, global_ids=False):
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        keep = src < self.indices
        pairs = np.column_stack([src[keep], self.indices[keep]])
        return self.global_ids[pairs] if global_ids else pairs


def induced_subgraph(graph, nodes, truncated=False, provenance=None):
    """Extract the subgraph induced by ``nodes`` (any iterable of ids)."""
    ids = np.unique(np.fromiter(nodes, dtype=np.int64)) if not isinstance(nodes, np.ndarray) \
        else np.unique(nodes.astype(np.int64))
    if len(ids) and (ids[0] < 0 or ids[-1] >= graph.node_count):
        raise ContractError(f"node id out of range 0..{graph.node_count - 1}")
    member = np.zeros(graph.node_count, dtype=bool)
    member[ids] = True
    indptr = np.zeros(len(ids) + 1, dtype=np.int64)
    chunks = []
    for local, g in enumerate(ids):
        nb = graph.neighbors(g)
        kept = nb[member[nb]]
        chunks.append(np.searchsorted(ids, kept))
        indptr[local + 1] = indptr[local] + len(kept)
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return Subgraph(global_ids=ids, indptr=indptr, indices=indices,
                    truncated=truncated, provenance=provenance)


def write_edge_list(graph, path):
    """Write the graph back out as a ``u v`` edge list (external ids if any)."""
    pairs = graph.edge_array()
    if graph.external_ids is not None:
        pairs = graph.external_ids[pairs]
    np.savetxt(path, pairs, fmt="%d")


def write_subgraph(subgraph, nodes_path, edges_path):
    """Persist a subgraph as its global node id list plus local edge pairs."""
    np.savetxt(nodes_path, subgraph.global_ids, fmt="%d")
    np.savetxt(edges_path, subgraph.edge_array(), fmt="%d")


def read_subgraph(nodes_path, edges_path):
    nodes = np.loadtxt(nodes_path, dtype=np.int64, ndmin=1)
    text = Path(edges_path).read_text().strip()
    if text:
        pairs = np.array([[int(x) for x in line.split()] for line in text.splitlines()],
                         dtype=np.int64)
    else:
        pairs = np.zeros((0, 2), dtype=np.int64)
    k = len(nodes)
    if len(pairs) and pairs.max() >= k:
        raise ParseError(f"local edge id exceeds node count in {edges_path}")
    both = np.concatenate([pairs, pairs[:, ::-1]]) if len(pairs) else pairs
    order = np.lexsort((both[:, 1], both[:, 0])) if len(both) else []
    both = both[order] if len(both) else both.reshape(0, 2)
    indptr = np.zeros(k + 1, dtype=np.int64)
    if len(both):
        np.add.at(indptr, both[:, 0] + 1, 1)
    np.cumsum(indptr, out=indptr)
    indices = both[:, 1].copy() if len(both) else np.zeros(0, dtype=np.int64)
    return Subgraph(global_ids=nodes, indptr=indptr, indices=indices)


def read_subgraph_dir(directory):
    """Load every subgraph written by the ``sample`` command, sorted by index."""
    directory = Path(directory)
    out = []
    for nodes_path in sorted(directory.glob("sub-*.nodes.txt")):
        edges_path = nodes_path.with_name(nodes_path.name.replace(".nodes.", ".edges."))
        out.append(read_subgraph(nodes_path, edges_path))
    if not out:
        raise ParseError(f"no sub-*.nodes.txt files in {directory}")
    return out
