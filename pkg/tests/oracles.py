"""Brute-force reference implementations used only by the tests.

Every oracle here deliberately ignores the library's algorithms and recomputes
the target quantity by direct enumeration, so a test that compares the two is
a genuine two-route check.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def brute_degree_threshold(graph):
    """argmax over d of |{(u,v): d_u > d, d_v <= d}| by direct scan."""
    deg = graph.degrees
    edges = graph.edge_array()
    best_d, best_count = None, -1
    for d in range(1, int(deg.max()) + 1):
        du = deg[edges[:, 0]]
        dv = deg[edges[:, 1]]
        count = int(((np.maximum(du, dv) > d) & (np.minimum(du, dv) <= d)).sum())
        if count > best_count:
            best_d, best_count = d, count
    return best_d, best_count


def brute_induced_edge_count(graph, nodes):
    nodes = set(int(v) for v in nodes)
    return sum(1 for u, v in graph.edge_array() if int(u) in nodes and int(v) in nodes)


def brute_transport_cost(supplies, demands, cost):
    """Minimum transport cost by exhaustive enumeration of integer plans.

    Integer marginals make the transportation polytope integral, so scanning
    all integer matrices with the given row/column sums visits every vertex.
    """
    m, n = cost.shape
    best = [None]
    plan = [[0] * n for _ in range(m)]

    def fill_row(i, col_left):
        if i == m:
            if all(c == 0 for c in col_left):
                total = sum(plan[a][b] * int(cost[a, b]) for a in range(m) for b in range(n))
                if best[0] is None or total < best[0]:
                    best[0] = total
            return

        def cells(j, left):
            if j == n:
                if left == 0:
                    fill_row(i + 1, col_left)
                return
            for x in range(min(left, col_left[j]) + 1):
                plan[i][j] = x
                col_left[j] -= x
                cells(j + 1, left - x)
                col_left[j] += x
                plan[i][j] = 0

        cells(0, int(supplies[i]))

    fill_row(0, [int(b) for b in demands])
    return best[0]


def brute_exact_orc(graph, u, v):
    """Curvature via exhaustive transport enumeration, exact rational."""
    du, dv = graph.degree(u), graph.degree(v)
    nu, nv = graph.neighbors(u), graph.neighbors(v)
    cost = np.empty((du, dv), dtype=np.int64)
    for i, p in enumerate(nu):
        for j, q in enumerate(nv):
            cost[i, j] = bfs_distance(graph, int(p), int(q), cap=3)
    scale = math.lcm(du, dv)
    supplies = [scale // du] * du
    demands = [scale // dv] * dv
    total = brute_transport_cost(supplies, demands, cost)
    return float(1 - Fraction(total, scale))


def bfs_distance(graph, p, q, cap=None):
    """Unbounded (or capped) breadth-first shortest path distance."""
    if p == q:
        return 0
    seen = {p}
    frontier = [p]
    depth = 0
    while frontier:
        depth += 1
        if cap is not None and depth > cap:
            return cap
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
    return cap if cap is not None else math.inf


def brute_chains(graph, k):
    """All 4-node degree-capped simple paths by scanning every 4-permutation."""
    deg = graph.degrees
    nodes = [v for v in range(graph.node_count) if deg[v] <= k]
    found = set()
    for a, b, c, d in itertools.permutations(nodes, 4):
        if graph.has_edge(a, b) and graph.has_edge(b, c) and graph.has_edge(c, d):
            found.add((a, b, c, d) if a < d else (d, c, b, a))
    return found


def random_graph(rng, n, p):
    """Plain Erdos-Renyi edge list (possibly disconnected, never empty)."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    return edges
