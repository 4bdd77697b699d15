import numpy as np
import pytest

import hisample as hs
from hisample.errors import ParameterError

from oracles import brute_degree_threshold, random_graph


def test_star_threshold(star6):
    # straddling count is 5 for d in 1..4, 0 above; smallest argmax wins
    assert hs.compute_degree_threshold(star6) == 1
    counts = hs.vertical_counts_by_threshold(star6)
    assert list(counts) == [5, 5, 5, 5, 0]


def test_triangle_degenerate(triangle):
    # regular graph: objective zero everywhere, threshold falls back to d_max
    assert hs.compute_degree_threshold(triangle) == 2
    part = hs.partition_graph(triangle, 2)
    assert part.core_count == 0
    assert part.periphery_edge_count == 3
    assert part.degenerate


def test_edgeless_graph_rejected():
    g = hs.from_edges([], node_count=3)
    with pytest.raises(ParameterError):
        hs.compute_degree_threshold(g)


def test_star_partition(star6):
    part = hs.partition_graph(star6, 1)
    assert part.core_count == 1
    assert bool(part.is_core[0])
    assert part.periphery_count == 5
    assert part.vertical_edge_count == 5
    assert part.core_edge_count == 0
    assert part.periphery_edge_count == 0


def test_partition_counts_add_up(ba1000):
    part, _ = hs.partition(ba1000)
    assert part.core_count + part.periphery_count == ba1000.node_count
    assert (part.core_edge_count + part.periphery_edge_count
            + part.vertical_edge_count) == ba1000.edge_count


def test_bruteforce_equivalence_random():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(5, 120))
        g = hs.from_edges(random_graph(rng, n, 0.1), node_count=n)
        d_my = hs.compute_degree_threshold(g)
        d_ref, count_ref = brute_degree_threshold(g)
        if count_ref == 0:
            assert d_my == g.degrees.max()
        else:
            assert d_my == d_ref


def test_monotone_consistency(ba1000):
    # objective at the returned threshold dominates every other candidate
    counts = hs.vertical_counts_by_threshold(ba1000)
    d_th = hs.compute_degree_threshold(ba1000)
    assert counts[d_th - 1] == counts.max()
    part = hs.partition_graph(ba1000, d_th)
    assert part.vertical_edge_count == counts[d_th - 1]


def test_threshold_validation(star6):
    with pytest.raises(ParameterError):
        hs.partition_graph(star6, 0)


def test_stats_star(star6):
    part = hs.partition_graph(star6, 1)
    stats = hs.partition_stats(part, star6, 0.0)
    assert stats["core_ratio"] == pytest.approx(1 / 6)
    assert stats["vertical_edge_ratio"] == pytest.approx(1.0)
    assert not stats["degenerate"]


def test_stats_regular_graph_reports_empty_core():
    ring = hs.from_edges([(i, (i + 1) % 8) for i in range(8)])
    part = hs.partition_graph(ring, hs.compute_degree_threshold(ring))
    stats = hs.partition_stats(part, ring, 0.0)
    assert stats["core_ratio"] == 0.0
    assert stats["degenerate"]


def test_core_ratio_shrinks_with_scale():
    # scale-free growth concentrates the core: ratio drifts down as n grows
    sizes = (500, 1000, 2000, 4000)
    ratios = []
    for n in sizes:
        per_seed = []
        for seed in range(5):
            g = hs.generate_ba(n, 3, seed=seed)
            part, _ = hs.partition(g)
            per_seed.append(part.core_count / n)
        ratios.append(np.mean(per_seed))
    for a, b in zip(ratios, ratios[1:]):
        assert b <= a + 0.005
    assert ratios[-1] < ratios[0]
