"""Minibatch GNN training on pre-sampled subgraphs with loss normalization."""

__version__ = "0.1.0"

from .data import Dataset, SubgraphBatch, load_dataset, load_lambda, load_subgraphs
from .model import SageNet, mean_adjacency
from .training import PRESETS, TrainConfig, TrainResult, evaluate, micro_f1, normalized_loss, train
