import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import hisample as hs
from hisample.errors import ContractError, ParameterError

from oracles import brute_induced_edge_count, random_graph


def weighted_star(norms=None):
    """Periphery hub 0 with two periphery neighbors (deg 3, 8) and padding.

    Built so node 0 stays periphery and its two tracked neighbors have the
    exact degrees the hand-computed weight examples use.
    """
    edges = [(0, 1), (0, 2)]
    edges += [(1, i) for i in range(3, 5)]          # node 1: degree 3
    edges += [(2, i) for i in range(5, 12)]         # node 2: degree 8
    g = hs.from_edges(edges, node_count=12)
    if norms is not None:
        feats = np.zeros((12, 1), dtype=np.float32)
        feats[:, 0] = norms
        g = hs.with_features(g, feats)
    return g


def test_periphery_weights_hand_example():
    # unit norms, neighbor degrees 3 and 8 -> raw 1/2, 1/3 -> probs 0.6, 0.4
    g = weighted_star()
    part = hs.partition_graph(g, 100)  # everything periphery
    ids, probs = hs.periphery_weights(g, part, 0)
    by_id = dict(zip(ids.tolist(), probs.tolist()))
    assert by_id[1] == pytest.approx(0.6)
    assert by_id[2] == pytest.approx(0.4)


def test_core_weights_hand_example():
    # unit norms, core degrees 3 and 8 -> raw 2, 3 -> probs 0.4, 0.6
    g = weighted_star()
    part = hs.partition_graph(g, 2)  # degree > 2 marks nodes 1, 2 core
    assert bool(part.is_core[1]) and bool(part.is_core[2])
    assert not part.is_core[0]
    ids, probs = hs.core_weights(g, part, 0)
    by_id = dict(zip(ids.tolist(), probs.tolist()))
    assert by_id[1] == pytest.approx(0.4)
    assert by_id[2] == pytest.approx(0.6)


def test_core_weights_norms_cancel_degree():
    # norms (2, 1) on equal degrees: probabilities 2/3 and 1/3
    edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]
    norms = np.ones(7)
    norms[1], norms[2] = 2.0, 1.0
    feats = norms[:, None].astype(np.float32)
    g = hs.with_features(hs.from_edges(edges, node_count=7), feats)
    part = hs.partition_graph(g, 2)
    ids, probs = hs.core_weights(g, part, 0)
    by_id = dict(zip(ids.tolist(), probs.tolist()))
    assert by_id[1] == pytest.approx(2 / 3)
    assert by_id[2] == pytest.approx(1 / 3)


def test_single_neighbor_probability_one(path3):
    part = hs.partition_graph(path3, 1)
    ids, probs = hs.core_weights(path3, part, 0)
    assert list(ids) == [1]
    assert probs[0] == pytest.approx(1.0)


def test_exclusions_empty_support():
    g = weighted_star()
    part = hs.partition_graph(g, 100)
    ids, probs = hs.periphery_weights(g, part, 0, exclusions=[1, 2])
    assert len(ids) == 0
    assert len(probs) == 0


def test_weights_reject_core_node():
    g = weighted_star()
    part = hs.partition_graph(g, 2)
    with pytest.raises(ContractError):
        hs.periphery_weights(g, part, 1)
    with pytest.raises(ContractError):
        hs.core_weights(g, part, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_weights_normalize_to_one(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 40))
    g0 = hs.from_edges(random_graph(rng, n, 0.2), node_count=n)
    g = hs.with_features(g0, rng.lognormal(size=(n, 2)).astype(np.float32))
    part, _ = hs.partition(g)
    for v in part.periphery_nodes():
        for ids, probs in (hs.periphery_weights(g, part, int(v)),
                           hs.core_weights(g, part, int(v))):
            if len(ids):
                assert abs(probs.sum() - 1.0) < 1e-9


def test_weighted_sample_without_replacement_exhausts():
    rng = np.random.default_rng(0)
    ids = np.array([10, 20, 30])
    out = hs.weighted_sample_without_replacement(rng, ids, np.array([1.0, 2.0, 3.0]), 5)
    assert sorted(out.tolist()) == [10, 20, 30]


def test_geometric_mean_is_two():
    rng = hs.subgraph_rng(123, 0)
    draws = rng.geometric(0.5, size=10 ** 5)
    assert draws.min() >= 1
    assert abs(draws.mean() - 2.0) < 0.1


# --- sampler behavior ---------------------------------------------------------

@pytest.fixture(scope="module")
def ba_partitioned():
    g = hs.generate_ba(400, 3, seed=2)
    part, _ = hs.partition(g)
    return g, part


@pytest.mark.parametrize("method", hs.METHODS)
def test_deterministic_replay(ba_partitioned, method):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method=method, sample_size=60, gamma=1.0, walk_length=3,
                           roots=12, edge_budget=30, seed=42)
    a = hs.sample_subgraph(g, part, cfg, index=5)
    b = hs.sample_subgraph(g, part, cfg, index=5)
    assert np.array_equal(a.global_ids, b.global_ids)
    c = hs.sample_subgraph(g, part, cfg, index=6)
    assert not np.array_equal(a.global_ids, c.global_ids)


@pytest.mark.parametrize("method", hs.METHODS)
def test_node_induced_closure(ba_partitioned, method):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method=method, sample_size=60, gamma=1.0, walk_length=3,
                           roots=12, edge_budget=30, seed=9)
    sg = hs.sample_subgraph(g, part, cfg, index=0)
    assert sg.edge_count == brute_induced_edge_count(g, sg.global_ids)


def test_his_purity(ba_partitioned):
    g, part = ba_partitioned
    for method in ("his-ff", "his-rw"):
        cfg = hs.SamplerConfig(method=method, sample_size=80, gamma=1.0,
                               walk_length=4, seed=3, track_provenance=True)
        sg = hs.sample_subgraph(g, part, cfg, index=1)
        prov = sg.provenance
        assert not part.is_core[prov["periphery"]].any()
        assert part.is_core[prov["core"]].all() or len(prov["core"]) == 0
        assert sorted(set(prov["periphery"]) | set(prov["core"])) == sg.global_ids.tolist()


def test_his_ff_exhausts_connected_graph(ba_partitioned):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method="his-ff", sample_size=g.node_count, gamma=1.0, seed=1)
    sg = hs.sample_his_ff(g, part, cfg)
    assert sg.node_count == g.node_count
    assert not sg.truncated


def test_his_ff_truncates_when_periphery_runs_out():
    # forced d_th=1 on a 5-path marks the three interior nodes core; the
    # middle one has no periphery neighbor, so the sampler cannot reach it
    path5 = hs.from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])
    part = hs.partition_graph(path5, 1)  # cores: 1, 2, 3
    cfg = hs.SamplerConfig(method="his-ff", sample_size=5, gamma=1.0, seed=0)
    sg = hs.sample_his_ff(path5, part, cfg)
    assert sg.truncated
    assert sorted(sg.global_ids.tolist()) == [0, 1, 3, 4]


def test_his_rw_truncates_when_periphery_runs_out():
    path5 = hs.from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])
    part = hs.partition_graph(path5, 1)
    cfg = hs.SamplerConfig(method="his-rw", sample_size=5, gamma=1.0, walk_length=3, seed=0)
    sg = hs.sample_his_rw(path5, part, cfg)
    assert sg.truncated
    assert sorted(sg.global_ids.tolist()) == [0, 1, 3, 4]


def test_his_ff_core_draw_exhausts_support():
    # every periphery node here has exactly the two hubs as core neighbors,
    # so gamma=1 forces t=2 and the first pop pulls in both
    edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 4), (2, 4)]
    g = hs.from_edges(edges, node_count=5)
    part = hs.partition_graph(g, 2)
    assert sorted(part.core_nodes().tolist()) == [1, 2]
    cfg = hs.SamplerConfig(method="his-ff", sample_size=3, gamma=1.0, seed=0)
    sg = hs.sample_his_ff(g, part, cfg)
    assert sg.node_count == 3
    assert {1, 2} <= set(sg.global_ids.tolist())


def test_sample_size_validation(ba_partitioned):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method="his-ff", sample_size=g.node_count + 1)
    with pytest.raises(ParameterError):
        hs.sample_his_ff(g, part, cfg)
    with pytest.raises(ParameterError):
        hs.SamplerConfig(method="his-ff", gamma=0.0)
    with pytest.raises(ParameterError):
        hs.SamplerConfig(method="nope")


def test_gamma_default_rule(ba_partitioned):
    g, _ = ba_partitioned
    cfg = hs.SamplerConfig(method="his-ff", sample_size=10)
    assert cfg.resolve_gamma(g) == 1.0
    # Table-3-style large-graph configuration is representable
    big = hs.SamplerConfig(method="his-rw", sampling_rate=0.05, walk_length=15, gamma=1.0)
    assert big.sampling_rate == 0.05 and big.walk_length == 15 and big.gamma == 1.0


class _NodeCountStub:
    def __init__(self, node_count):
        self.node_count = node_count


def test_rate_to_size_floor_arithmetic():
    cfg = hs.SamplerConfig(method="his-ff", sampling_rate=0.05)
    assert cfg.resolve_sample_size(_NodeCountStub(90_941)) == 4_547
    assert cfg.resolve_gamma(_NodeCountStub(90_941)) == 1.0
    assert cfg.resolve_gamma(_NodeCountStub(150_000)) == 0.4


def test_his_rw_star_center_always_present(star6):
    # leaves have no periphery neighbors: every walk is one node long and the
    # center can only arrive through its vertical edges
    part = hs.partition_graph(star6, 1)
    cfg = hs.SamplerConfig(method="his-rw", sample_size=3, gamma=1.0, walk_length=2, seed=0,
                           track_provenance=True)
    for index in range(20):
        sg = hs.sample_his_rw(star6, part, cfg, index)
        assert 0 in sg.global_ids.tolist()
        assert 0 in sg.provenance["core"]


def test_his_rw_walk_visits_two_on_path(path4):
    part = hs.partition_graph(path4, 5)  # all periphery
    cfg = hs.SamplerConfig(method="his-rw", sample_size=2, gamma=1.0, walk_length=1, seed=4)
    sg = hs.sample_his_rw(path4, part, cfg)
    assert sg.node_count == 2


def test_saint_edge_star_uniform(star6):
    # every star edge has weight 1/5 + 1: the sampler is uniform over edges
    cfg = hs.SamplerConfig(method="saint-edge", edge_budget=1, seed=0)
    hits = np.zeros(6)
    for i in range(4000):
        sg = hs.sample_saint_edge(star6, cfg, index=i)
        assert sg.node_count == 2 and sg.edge_count == 1
        leaf = [v for v in sg.global_ids.tolist() if v != 0][0]
        hits[leaf] += 1
    freq = hits[1:] / 4000
    assert np.allclose(freq, 0.2, atol=0.03)


def test_saint_edge_budget_exceeding_edges(triangle):
    cfg = hs.SamplerConfig(method="saint-edge", edge_budget=50, seed=0)
    sg = hs.sample_saint_edge(triangle, cfg)
    assert sg.node_count == 3


def test_saint_rw_bounds(ba_partitioned):
    g, _ = ba_partitioned
    cfg = hs.SamplerConfig(method="saint-rw", roots=7, walk_length=4, seed=0)
    sg = hs.sample_saint_rw(g, cfg)
    assert sg.node_count <= 7 * 5
    single = hs.SamplerConfig(method="saint-rw", roots=1, walk_length=0, seed=0)
    assert hs.sample_saint_rw(g, single).node_count == 1


def test_uniform_node_extremes(ba_partitioned):
    g, _ = ba_partitioned
    full = hs.SamplerConfig(method="uniform-node", sample_size=g.node_count, seed=0)
    assert hs.sample_uniform_node(g, full).node_count == g.node_count
    one = hs.SamplerConfig(method="uniform-node", sample_size=1, seed=0)
    sg = hs.sample_uniform_node(g, one)
    assert sg.node_count == 1 and sg.edge_count == 0


def test_uniform_node_frequencies():
    g = hs.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    cfg = hs.SamplerConfig(method="uniform-node", sample_size=2, seed=8)
    hits = np.zeros(4)
    for i in range(10 ** 4):
        hits[hs.sample_uniform_node(g, cfg, index=i).global_ids] += 1
    assert np.allclose(hits / 10 ** 4, 0.5, atol=0.02)


def test_centrum_preserved_more_than_baseline(ba1000):
    g = ba1000
    part, _ = hs.partition(g)
    hub = int(np.argmax(g.degrees))
    cfg_ff = hs.SamplerConfig(method="his-ff", sample_size=100, gamma=1.0, seed=3)
    roots = hs.saint_rw_roots_for_target(g, 100, 4, seed=99)
    cfg_rw = hs.SamplerConfig(method="saint-rw", roots=roots, walk_length=4, seed=3)
    n = 500
    ff = sum(hub in hs.sample_his_ff(g, part, cfg_ff, i).global_ids.tolist()
             for i in range(n)) / n
    rw = sum(hub in hs.sample_saint_rw(g, cfg_rw, i).global_ids.tolist()
             for i in range(n)) / n
    assert ff > rw


# --- counters and coefficients -------------------------------------------------

def test_counters_identical_subgraphs(triangle):
    sg = hs.induced_subgraph(triangle, [0, 1, 2])
    counters = hs.accumulate_frequencies(triangle, [sg, sg, sg])
    assert (counters.node_counts == 3).all()
    assert (counters.edge_counts == 3).all()
    coeffs = hs.compute_norm_coefficients(counters)
    assert np.allclose(coeffs.lambda_v, 1.0)
    assert np.allclose(coeffs.alpha_uv, 1.0)


def test_counters_disjoint_subgraphs(path4):
    a = hs.induced_subgraph(path4, [0, 1])
    b = hs.induced_subgraph(path4, [2, 3])
    counters = hs.accumulate_frequencies(path4, [a, b])
    assert set(counters.node_counts.tolist()) == {1}
    assert sorted(counters.edge_counts.tolist()) == [0, 1, 1]
    coeffs = hs.compute_norm_coefficients(counters)
    assert np.allclose(coeffs.lambda_v, 0.5)
    assert not coeffs.unseen.any()


def test_counter_invariants(ba_partitioned):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method="his-ff", sample_size=60, gamma=1.0, seed=5)
    subs = hs.sample_subgraphs(g, part, cfg, 25)
    counters = hs.accumulate_frequencies(g, subs)
    assert counters.node_counts.max() <= 25
    cu = counters.node_counts[counters.edge_keys[:, 0]]
    cv = counters.node_counts[counters.edge_keys[:, 1]]
    assert (counters.edge_counts <= np.minimum(cu, cv)).all()
    coeffs = hs.compute_norm_coefficients(counters)
    seen = counters.node_counts > 0
    assert (coeffs.lambda_v[seen] > 0).all()
    assert np.isnan(coeffs.alpha_uv[counters.edge_counts == 0]).all()
    defined = counters.edge_counts > 0
    assert np.isfinite(coeffs.alpha_uv[defined]).all()


def test_half_lambda(path3):
    full = hs.induced_subgraph(path3, [0, 1, 2])
    half = hs.induced_subgraph(path3, [0])
    counters = hs.accumulate_frequencies(path3, [full, half])
    coeffs = hs.compute_norm_coefficients(counters)
    assert coeffs.lambda_v[0] == pytest.approx(1.0)
    assert coeffs.lambda_v[1] == pytest.approx(0.5)


def test_parallel_sampling_matches_serial(ba_partitioned):
    g, part = ba_partitioned
    cfg = hs.SamplerConfig(method="his-ff", sample_size=50, gamma=1.0, seed=13)
    serial = hs.sample_subgraphs(g, part, cfg, 8, workers=1)
    parallel = hs.sample_subgraphs(g, part, cfg, 8, workers=4)
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.global_ids, b.global_ids)
        assert np.array_equal(a.indices, b.indices)


def test_monte_carlo_importance_weights_reduce_variance():
    # scalar-feature estimator of the periphery aggregation term: the
    # norm-over-degree weighting should never lose to uniform sampling
    strict = 0
    for inst in range(5):
        rng = np.random.default_rng(100 + inst)
        g0 = hs.generate_ba(30, 3, seed=inst)
        g = hs.with_features(g0, rng.lognormal(0, 0.6, size=(30, 1)).astype(np.float32))
        part, _ = hs.partition(g)
        v = max(part.periphery_nodes(),
                key=lambda w: int((~part.is_core[g.neighbors(w)]).sum()))
        ids, probs = hs.periphery_weights(g, part, int(v))
        assert len(ids) >= 2
        x = g.features[ids, 0].astype(np.float64)
        a_vu = 1.0 / np.sqrt((g.degree(int(v)) + 1.0) * (g.degrees[ids] + 1.0))
        vals = a_vu * x
        draws = 10 ** 5
        uniform = np.full(len(ids), 1.0 / len(ids))

        def estimator_variance(p):
            u = rng.choice(len(ids), size=draws, p=p)
            return (vals[u] / p[u]).var()

        var_w = estimator_variance(probs)
        var_u = estimator_variance(uniform)
        assert var_w <= var_u + 1e-12
        strict += var_w < var_u
    assert strict >= 4
