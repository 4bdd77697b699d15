"""Loaders for the sampling toolkit's file interchange formats.

The trainer deliberately reads only files: the training-graph edge list,
feature/label CSVs, a split CSV, the sampled subgraph directory
(sub-*.nodes.txt / sub-*.edges.txt pairs) and the node coefficient CSV
(node_id,count,lambda). It never imports the sampler package.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class Dataset:
    edge_index: np.ndarray      # (2, 2m) symmetric directed pairs
    features: np.ndarray        # (n, f) float32
    labels: np.ndarray          # (n,) int64 or (n, c) float32 multi-hot
    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray

    @property
    def node_count(self):
        return len(self.features)

    @property
    def num_classes(self):
        if self.labels.ndim == 2:
            return self.labels.shape[1]
        return int(self.labels.max()) + 1

    @property
    def multilabel(self):
        return self.labels.ndim == 2


@dataclass
class SubgraphBatch:
    nodes: np.ndarray           # global ids, sorted
    edge_index: np.ndarray      # (2, 2m) local symmetric pairs


def load_edge_index(path):
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, v = line.replace(",", " ").split()[:2]
            pairs.append((int(u), int(v)))
    e = np.asarray(pairs, dtype=np.int64)
    e = e[e[:, 0] != e[:, 1]]
    both = np.unique(np.concatenate([e, e[:, ::-1]]), axis=0)
    return both.T.copy()


def load_features(path):
    path = Path(path)
    if path.suffix in (".bin", ".dat", ".raw"):
        with open(path, "rb") as fh:
            rows, cols = map(int, np.fromfile(fh, dtype="<i8", count=2))
            data = np.fromfile(fh, dtype="<f4", count=rows * cols)
        return data.reshape(rows, cols)
    return np.loadtxt(path, delimiter=",", dtype=np.float32, ndmin=2)


def load_labels(path, node_count):
    raw = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    if raw.shape[1] == 2 and raw.shape[0] <= node_count:
        labels = np.zeros(node_count, dtype=np.int64)
        labels[raw[:, 0].astype(np.int64)] = raw[:, 1].astype(np.int64)
        return labels
    return raw.astype(np.float32)


def load_splits(path, node_count):
    masks = {name: np.zeros(node_count, dtype=bool) for name in ("train", "val", "test")}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("node_id"):
                continue
            node, split = line.split(",")
            masks[split][int(node)] = True
    return masks["train"], masks["val"], masks["test"]


def load_dataset(edges, features, labels, splits):
    edge_index = load_edge_index(edges)
    feats = load_features(features)
    labs = load_labels(labels, len(feats))
    train, val, test = load_splits(splits, len(feats))
    return Dataset(edge_index=edge_index, features=feats, labels=labs,
                   train_mask=train, val_mask=val, test_mask=test)


def load_subgraphs(directory):
    directory = Path(directory)
    batches = []
    for nodes_path in sorted(directory.glob("sub-*.nodes.txt")):
        edges_path = nodes_path.with_name(nodes_path.name.replace(".nodes.", ".edges."))
        nodes = np.loadtxt(nodes_path, dtype=np.int64, ndmin=1)
        text = edges_path.read_text().strip()
        if text:
            pairs = np.asarray([[int(x) for x in ln.split()] for ln in text.splitlines()],
                               dtype=np.int64)
            both = np.concatenate([pairs, pairs[:, ::-1]]).T.copy()
        else:
            both = np.zeros((2, 0), dtype=np.int64)
        batches.append(SubgraphBatch(nodes=nodes, edge_index=both))
    if not batches:
        raise FileNotFoundError(f"no sub-*.nodes.txt files in {directory}")
    return batches


def load_lambda(path):
    """Per-node loss coefficients from the sampler's node_coefficients.csv."""
    rows = Path(path).read_text().strip().splitlines()
    header = rows[0].split(",")
    lam_col = header.index("lambda")
    out = {}
    for row in rows[1:]:
        parts = row.split(",")
        out[int(parts[0])] = float(parts[lam_col])
    lam = np.zeros(max(out) + 1, dtype=np.float64)
    for node, value in out.items():
        lam[node] = value
    return lam
