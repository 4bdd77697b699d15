"""Exact integer min-cost transport on small dense instances.

Successive shortest augmenting paths with node potentials. All capacities
and costs are integers, so every augmentation and the final optimum are
integers: no floating-point rounding enters the result. Instances here are
tiny (two neighborhoods plus source/sink), so the Dijkstra step uses dense
numpy scans instead of a heap.
"""

import numpy as np

INF = np.iinfo(np.int64).max // 4


class DenseMinCostFlow:
    """Min-cost flow on a dense residual matrix (int64 throughout)."""

    def __init__(self, n_nodes):
        self.n = n_nodes
        self.cap = np.zeros((n_nodes, n_nodes), dtype=np.int64)
        self.cost = np.zeros((n_nodes, n_nodes), dtype=np.int64)

    def add_edge(self, u, v, capacity, cost):
        self.cap[u, v] += capacity
        self.cost[u, v] = cost
        self.cost[v, u] = -cost

    def solve(self, source, sink):
        """Push max flow at min cost; returns (flow_value, total_cost, flow_matrix)."""
        n = self.n
        residual = self.cap.copy()
        potential = np.zeros(n, dtype=np.int64)
        total_flow = 0
        total_cost = 0
        while True:
            dist = np.full(n, INF, dtype=np.int64)
            dist[source] = 0
            parent = np.full(n, -1, dtype=np.int64)
            done = np.zeros(n, dtype=bool)
            for _ in range(n):
                u = -1
                best = INF
                cand = np.where(~done, dist, INF)
                u = int(np.argmin(cand))
                best = cand[u]
                if best >= INF:
                    break
                done[u] = True
                open_arcs = residual[u] > 0
                reduced = self.cost[u] + potential[u] - potential
                nd = best + reduced
                improve = open_arcs & (nd < dist)
                dist[improve] = nd[improve]
                parent[improve] = u
            if dist[sink] >= INF:
                break
            reached = dist < INF
            potential[reached] += dist[reached]
            # trace the augmenting path and find the bottleneck
            path = []
            v = sink
            while v != source:
                u = int(parent[v])
                path.append((u, v))
                v = u
            push = min(int(residual[u, v]) for u, v in path)
            for u, v in path:
                residual[u, v] -= push
                residual[v, u] += push
            total_flow += push
            total_cost += push * sum(int(self.cost[u, v]) for u, v in path)
        flow = np.maximum(self.cap - residual, 0)
        return total_flow, total_cost, flow


def solve_transport(supplies, demands, cost_matrix):
    """Exact transportation optimum for integer supplies/demands/costs.

    Returns (total_cost, plan) where plan[i, j] is the integer mass shipped
    from supply i to demand j. Supplies and demands must balance.
    """
    supplies = np.asarray(supplies, dtype=np.int64)
    demands = np.asarray(demands, dtype=np.int64)
    cost_matrix = np.asarray(cost_matrix, dtype=np.int64)
    m, n = cost_matrix.shape
    if supplies.sum() != demands.sum():
        raise ValueError("unbalanced transport instance")
    net = DenseMinCostFlow(m + n + 2)
    source, sink = m + n, m + n + 1
    for i in range(m):
        net.add_edge(source, i, int(supplies[i]), 0)
    for j in range(n):
        net.add_edge(m + j, sink, int(demands[j]), 0)
    for i in range(m):
        for j in range(n):
            net.add_edge(i, m + j, INF, int(cost_matrix[i, j]))
    flow_value, total_cost, flow = net.solve(source, sink)
    if flow_value != supplies.sum():
        raise ValueError("transport instance is infeasible")
    return total_cost, flow[:m, m:m + n]
