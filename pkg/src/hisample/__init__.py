"""Hierarchical core-periphery importance sampling for GNN minibatches,
plus the diagnostics used to judge samplers: core-periphery partition,
edge curvature (exact and localized), chain-preservation rate and
node-aggregation variance."""

__version__ = "0.1.0"

from .curvature import (
    CurvatureReport,
    average_curvature,
    edge_curvatures,
    exact_orc,
    local_distance,
    localized_curvature_bound,
    triangle_count,
)
from .errors import (
    ContractError,
    DimensionError,
    HisampleError,
    ParameterError,
    ParseError,
)
from .graph import (
    Graph,
    Subgraph,
    from_edges,
    generate_ba,
    induced_subgraph,
    load_edge_list,
    load_features,
    load_labels,
    read_subgraph,
    read_subgraph_dir,
    with_features,
    write_edge_list,
    write_subgraph,
)
from .metrics import (
    ChainReport,
    ChainSet,
    ForwardConfig,
    VarianceReport,
    aggregation_variance,
    chain_preservation_rate,
    count_chains,
    enumerate_chains,
    forward_pass,
    init_weights,
)
from .partition import (
    CorePeripheryPartition,
    compute_degree_threshold,
    partition,
    partition_graph,
    partition_stats,
    vertical_counts_by_threshold,
)
from .sampling import (
    METHODS,
    FrequencyCounters,
    NormCoefficients,
    SamplerConfig,
    accumulate_frequencies,
    compute_norm_coefficients,
    core_weights,
    periphery_weights,
    sample_his_ff,
    sample_his_rw,
    sample_saint_edge,
    sample_saint_rw,
    sample_subgraph,
    sample_subgraphs,
    sample_uniform_node,
    saint_edge_budget_for_target,
    saint_rw_roots_for_target,
    subgraph_rng,
    weighted_sample_without_replacement,
)
