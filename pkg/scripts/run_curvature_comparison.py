#!/usr/bin/env python3
"""Mean exact curvature of sampled-subgraph edges, per sampler, against the
original-graph mean (edge curvature always measured on the parent graph).

The effect of interest needs clustering: on nearly triangle-free graphs
(sparse preferential attachment at large n) the hierarchical sampler's core
pull-in drags the mean down instead of up. The default settings reproduce
the clustered small-graph regime where the hierarchy wins.
"""

import argparse

import numpy as np

import hisample as hs
from hisample.curvature import edge_curvatures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", help="edge list; default: generate a BA graph")
    ap.add_argument("--nodes", type=int, default=100)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--rate", type=float, default=0.15)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    g = hs.load_edge_list(args.graph) if args.graph else hs.generate_ba(args.nodes, args.m, seed=args.seed)
    part, _ = hs.partition(g)
    n_hat = max(2, int(g.node_count * args.rate))
    tri = sum(hs.triangle_count(g, int(u), int(v)) for u, v in g.edge_array()) // 3
    print(f"graph: {g.node_count} nodes / {g.edge_count} edges, d_th={part.d_th}, "
          f"{tri} triangles, target size {n_hat}")

    edges, values = edge_curvatures(g, mode="exact", workers=args.workers)
    by_key = dict(zip((edges[:, 0] * g.node_count + edges[:, 1]).tolist(), values.tolist()))
    print(f"original-graph mean: {values.mean():.4f}")

    budget = hs.saint_edge_budget_for_target(g, n_hat, seed=99)
    roots = hs.saint_rw_roots_for_target(g, n_hat, 4, seed=99)
    samplers = {
        "his-ff": lambda i: hs.sample_his_ff(
            g, part, hs.SamplerConfig(method="his-ff", sample_size=n_hat, seed=args.seed), i),
        "saint-rw": lambda i: hs.sample_saint_rw(
            g, hs.SamplerConfig(method="saint-rw", roots=roots, walk_length=4,
                                seed=args.seed), i),
        "saint-edge": lambda i: hs.sample_saint_edge(
            g, hs.SamplerConfig(method="saint-edge", edge_budget=budget, seed=args.seed), i),
    }
    for name, draw in samplers.items():
        total, count = 0.0, 0
        for i in range(args.count):
            ge = draw(i).edge_array(global_ids=True)
            if len(ge):
                kk = (ge[:, 0] * g.node_count + ge[:, 1]).tolist()
                total += sum(by_key[k] for k in kk)
                count += len(kk)
        print(f"{name}: mean over subgraph edges {total / count:.4f}")


if __name__ == "__main__":
    main()
