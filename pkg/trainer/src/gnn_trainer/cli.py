"""Command line for training on pre-sampled subgraphs.

Example:
    gnn-train --preset citeseer --edges data/citeseer-train.txt \\
        --features data/citeseer-features.csv --labels data/citeseer-labels.csv \\
        --splits data/citeseer-splits.csv --subgraphs out/ \\
        --coeffs out/node_coefficients.csv --out-dir run/

Emits metrics.jsonl (one record per epoch) and summary.json (final and
best-validation test F1).
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .data import load_dataset
from .training import PRESETS, TrainConfig, train


def build_parser():
    ap = argparse.ArgumentParser(prog="gnn-train", description=__doc__)
    ap.add_argument("--preset", choices=sorted(PRESETS), default=None)
    ap.add_argument("--edges", required=True)
    ap.add_argument("--features", required=True)
    ap.add_argument("--labels", required=True)
    ap.add_argument("--splits", required=True)
    ap.add_argument("--subgraphs", required=True)
    ap.add_argument("--coeffs", required=True)
    ap.add_argument("--out-dir", default="run")
    ap.add_argument("--epochs", type=int, default=None)
    ap.add_argument("--hidden", type=int, default=None)
    ap.add_argument("--lr", type=float, default=None)
    ap.add_argument("--dropout", type=float, default=None)
    ap.add_argument("--multilabel", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = PRESETS[args.preset] if args.preset else TrainConfig()
    overrides = {"epochs": args.epochs, "hidden_dim": args.hidden,
                 "learning_rate": args.lr, "dropout": args.dropout}
    config = dataclasses.replace(
        config, seed=args.seed, multilabel=args.multilabel,
        **{k: v for k, v in overrides.items() if v is not None})
    try:
        dataset = load_dataset(args.edges, args.features, args.labels, args.splits)
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result, _ = train(dataset, args.subgraphs, args.coeffs, config,
                          log_path=out / "metrics.jsonl")
    except FileNotFoundError as exc:
        print(f"gnn-train: {exc}", file=sys.stderr)
        return 2
    summary = {
        "test_f1_last": result.test_f1_last,
        "test_f1_best_val": result.test_f1_best_val,
        "val_f1_best": result.val_f1_best,
        "epochs": config.epochs,
        "config": dataclasses.asdict(config),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps({"test_f1_last": result.test_f1_last,
                      "test_f1_best_val": result.test_f1_best_val}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
