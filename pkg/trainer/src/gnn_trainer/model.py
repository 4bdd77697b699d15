"""Two-layer mean-aggregator GraphSAGE network."""

import torch
import torch.nn as nn


def mean_adjacency(edge_index, n, device=None):
    """Sparse row-normalized adjacency (mean over neighbors), no self loops."""
    src = torch.as_tensor(edge_index[0], dtype=torch.long, device=device)
    dst = torch.as_tensor(edge_index[1], dtype=torch.long, device=device)
    deg = torch.zeros(n, device=device).index_add_(0, src, torch.ones_like(src, dtype=torch.float))
    weight = 1.0 / deg.clamp(min=1.0)
    values = weight[src]
    return torch.sparse_coo_tensor(torch.stack([src, dst]), values, (n, n)).coalesce()


class SageLayer(nn.Module):
    def __init__(self, in_dim, out_dim):
        super().__init__()
        self.self_proj = nn.Linear(in_dim, out_dim)
        self.neighbor_proj = nn.Linear(in_dim, out_dim, bias=False)

    def forward(self, h, adj):
        return self.self_proj(h) + self.neighbor_proj(torch.sparse.mm(adj, h))


class SageNet(nn.Module):
    """feature -> hidden (ReLU) -> class logits, with input/hidden dropout."""

    def __init__(self, in_dim, hidden_dim, out_dim, dropout):
        super().__init__()
        self.layer1 = SageLayer(in_dim, hidden_dim)
        self.layer2 = SageLayer(hidden_dim, out_dim)
        self.dropout = nn.Dropout(dropout)

    def forward(self, x, adj):
        h = self.dropout(x)
        h = torch.relu(self.layer1(h, adj))
        h = self.dropout(h)
        return self.layer2(h, adj)
