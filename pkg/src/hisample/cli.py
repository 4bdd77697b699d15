"""Command-line entry point.

Subcommands: generate, partition, sample, curvature, chains, variance.
Every run writes a manifest.json into the output directory (config echo,
input digests, timings, output list); re-running a sample command with the
manifest's config reproduces byte-identical subgraph files.

Exit codes: 0 ok, 1 usage/parameter error, 2 I/O error, 3 contract/numeric
error.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, graph as gmod, metrics, sampling
from .curvature import average_curvature
from .errors import ContractError, DimensionError, ParameterError, ParseError
from .partition import partition as run_partition, partition_stats


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _default_threads():
    return int(os.environ.get("HISAMPLE_THREADS", "1"))


class _Run:
    """Collects manifest data while a command executes."""

    def __init__(self, args):
        self.args = args
        self.out_dir = Path(args.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.inputs = {}
        self.outputs = []
        self.t_wall = time.perf_counter()
        self.t_cpu = time.process_time()

    def track_input(self, path):
        self.inputs[str(path)] = _digest(path)

    def write_json(self, name, payload):
        path = self.out_dir / name
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.outputs.append(name)
        return path

    def write_rows(self, name, header, rows):
        path = self.out_dir / name
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(str(x) for x in row) + "\n")
        self.outputs.append(name)
        return path

    def finish(self, extra=None):
        config = {k: v for k, v in vars(self.args).items() if k != "func"}
        manifest = {
            "tool": f"hisample {__version__}",
            "command": self.args.command,
            "config": config,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_seconds": time.perf_counter() - self.t_wall,
            "cpu_seconds": time.process_time() - self.t_cpu,
        }
        if extra:
            manifest.update(extra)
        with open(self.out_dir / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        if not self.args.quiet:
            print(f"wrote {len(self.outputs)} file(s) to {self.out_dir}")


def _load_graph(args, run):
    run.track_input(args.graph)
    g = gmod.load_edge_list(args.graph, drop_isolated=not args.keep_isolated)
    if getattr(args, "features", None):
        run.track_input(args.features)
        g = gmod.load_features(args.features, g)
    if g.external_ids is not None and not np.array_equal(
            g.external_ids, np.arange(g.node_count)):
        # reports use dense ids; persist the mapping back to the source file
        run.write_rows("id_map.csv", "node_id,external_id",
                       enumerate(g.external_ids.tolist()))
    return g


def cmd_generate(args):
    run = _Run(args)
    if args.model != "ba":
        raise ParameterError(f"unknown model {args.model!r}")
    g = gmod.generate_ba(args.nodes, args.m, args.seed)
    out = run.out_dir / args.out
    gmod.write_edge_list(g, out)
    run.outputs.append(args.out)
    run.finish({"nodes": g.node_count, "edges": g.edge_count})
    return 0


def cmd_partition(args):
    run = _Run(args)
    g = _load_graph(args, run)
    part, cpu = run_partition(g)
    stats = partition_stats(part, g, cpu)
    run.write_json("partition.json", stats)
    if args.membership_csv:
        run.write_rows("membership.csv", "node_id,is_core",
                       ((int(v), int(part.is_core[v])) for v in range(g.node_count)))
    run.finish()
    if not args.quiet:
        print(json.dumps(stats))
    return 0


def cmd_sample(args):
    run = _Run(args)
    g = _load_graph(args, run)
    config = sampling.SamplerConfig(
        method=args.method,
        sample_size=args.size,
        sampling_rate=args.rate,
        gamma=args.gamma,
        walk_length=args.walk_length,
        geometric_p=args.geometric_p,
        roots=args.roots,
        edge_budget=args.edge_budget,
        seed=args.seed,
    )
    part = None
    if args.method in ("his-ff", "his-rw"):
        part, _ = run_partition(g)
    elif args.method == "saint-rw" and config.roots is None:
        config.roots = sampling.saint_rw_roots_for_target(
            g, config.resolve_sample_size(g), config.walk_length, seed=args.seed)
    elif args.method == "saint-edge" and config.edge_budget is None:
        config.edge_budget = sampling.saint_edge_budget_for_target(
            g, config.resolve_sample_size(g), seed=args.seed)

    records = []
    subgraphs = sampling.sample_subgraphs(g, part, config, args.count,
                                          workers=args.threads)
    for i, sg in enumerate(subgraphs):
        nodes_name = f"sub-{i:05d}.nodes.txt"
        edges_name = f"sub-{i:05d}.edges.txt"
        gmod.write_subgraph(sg, run.out_dir / nodes_name, run.out_dir / edges_name)
        run.outputs.extend([nodes_name, edges_name])
        records.append({"index": i, "nodes": sg.node_count, "edges": sg.edge_count,
                        "truncated": sg.truncated})

    counters = sampling.accumulate_frequencies(g, subgraphs)
    coeffs = sampling.compute_norm_coefficients(counters)
    run.write_rows("node_coefficients.csv", "node_id,count,lambda",
                   ((v, int(counters.node_counts[v]), repr(float(coeffs.lambda_v[v])))
                    for v in range(g.node_count)))
    run.write_rows("edge_coefficients.csv", "u,v,count,alpha",
                   ((int(u), int(v), int(c), "" if np.isnan(a) else repr(float(a)))
                    for (u, v), c, a in zip(counters.edge_keys, counters.edge_counts,
                                            coeffs.alpha_uv)))
    run.finish({"subgraphs": records,
                "resolved": {"gamma": config.resolve_gamma(g),
                             "sample_size": (config.resolve_sample_size(g)
                                             if args.method not in ("saint-edge", "saint-rw")
                                             or args.size or args.rate else None),
                             "roots": config.roots, "edge_budget": config.edge_budget}})
    return 0


def cmd_curvature(args):
    run = _Run(args)
    g = _load_graph(args, run)
    subgraphs = None
    if args.scope == "subgraphs":
        if not args.subgraphs:
            raise ParameterError("--scope subgraphs needs --subgraphs DIR")
        subgraphs = gmod.read_subgraph_dir(args.subgraphs)
    report = average_curvature(g, mode=args.mode, subgraphs=subgraphs,
                               per_subgraph_mean=args.per_subgraph_mean,
                               workers=args.threads, force=args.force)
    run.write_rows("edge_curvatures.csv", "u,v,value",
                   ((int(u), int(v), repr(float(x)))
                    for (u, v), x in zip(report.edges, report.values)))
    run.write_json("curvature.json", {"mode": report.mode, "scope": report.scope,
                                      "mean": report.mean, "count": report.edge_count})
    run.finish()
    if not args.quiet:
        print(json.dumps({"mean": report.mean, "count": report.edge_count}))
    return 0


def cmd_chains(args):
    run = _Run(args)
    g = _load_graph(args, run)
    subgraphs = gmod.read_subgraph_dir(args.subgraphs)
    report = metrics.chain_preservation_rate(g, args.k, subgraphs)
    run.write_json("chains.json", {
        "k": report.k, "n": report.n, "total_chains": report.total_chains,
        "preserved": report.preserved, "rate": report.rate,
        "exhaustive": report.exhaustive, "population": report.population})
    run.write_rows("chain_rate_vs_n.csv", "x,series,value",
                   ((i + 1, f"k={report.k}", repr(float(r)))
                    for i, r in enumerate(report.rates_by_n)))
    run.finish()
    if not args.quiet:
        print(json.dumps({"k": report.k, "rate": report.rate}))
    return 0


def cmd_variance(args):
    run = _Run(args)
    g = _load_graph(args, run)
    if g.features is None:
        raise ParameterError("variance needs --features")
    subgraphs = gmod.read_subgraph_dir(args.subgraphs)
    config = metrics.ForwardConfig(layers=args.layers, hidden_dim=args.hidden,
                                   weight_seed=args.weight_seed)
    report = metrics.aggregation_variance(g, subgraphs, config, track_curve=True,
                                          workers=args.threads)
    run.write_json("variance.json", {
        "var_avg": report.var_avg, "nodes": g.node_count, "subgraphs": len(subgraphs),
        "layers": config.layers, "hidden_dim": config.hidden_dim,
        "weight_seed": config.weight_seed})
    run.write_rows("var_vs_n.csv", "x,series,value",
                   ((i + 1, "var_avg", repr(float(v)))
                    for i, v in enumerate(report.var_avg_by_n)))
    run.finish()
    if not args.quiet:
        print(json.dumps({"var_avg": report.var_avg}))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="hisample", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_graph=True):
        p.add_argument("--out-dir", default="out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--quiet", action="store_true")
        if needs_graph:
            p.add_argument("--graph", required=True)
            p.add_argument("--keep-isolated", action="store_true")

    p = sub.add_parser("generate", help="write a synthetic scale-free edge list")
    common(p, needs_graph=False)
    p.add_argument("--model", default="ba")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", default="edges.txt")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", help="core-periphery decomposition report")
    common(p)
    p.add_argument("--membership-csv", action="store_true")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sample", help="draw subgraphs and normalization coefficients")
    common(p)
    p.add_argument("--method", default="his-ff", choices=sampling.METHODS)
    p.add_argument("--rate", type=float, default=None)
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--walk-length", type=int, default=2)
    p.add_argument("--geometric-p", type=float, default=0.5)
    p.add_argument("--roots", type=int, default=None)
    p.add_argument("--edge-budget", type=int, default=None)
    p.add_argument("--features", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("curvature", help="edge curvature report")
    common(p)
    p.add_argument("--mode", default="exact", choices=("exact", "localized"))
    p.add_argument("--scope", default="graph", choices=("graph", "subgraphs"))
    p.add_argument("--subgraphs", default=None)
    p.add_argument("--per-subgraph-mean", action="store_true")
    p.add_argument("--force", action="store_true",
                   help="solve transport instances above the degree guard")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("chains", help="chain preservation rate over subgraphs")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subgraphs", required=True)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("variance", help="aggregation variance over subgraphs")
    common(p)
    p.add_argument("--features", required=True)
    p.add_argument("--subgraphs", required=True)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--weight-seed", type=int, default=0)
    p.set_defaults(func=cmd_variance)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"hisample: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"hisample: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"hisample: {exc}", file=sys.stderr)
        return 2
    except (ContractError, DimensionError) as exc:
        print(f"hisample: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
