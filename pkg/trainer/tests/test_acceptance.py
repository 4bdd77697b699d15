"""End-to-end accuracy checks on the published benchmark datasets.

These run only when the prepared dataset files are present under
$HISAMPLE_DATA_DIR (default ./data); see the README for the expected file
layout (<name>-train.txt, <name>-full.txt, <name>-features.csv,
<name>-labels.csv, <name>-splits.csv).
"""

import os
import time
from pathlib import Path

import pytest

from conftest import run_sampler_cli
from gnn_trainer import PRESETS, load_dataset, train

DATA_DIR = Path(os.environ.get("HISAMPLE_DATA_DIR", "data"))


def dataset_files(name):
    files = {kind: DATA_DIR / f"{name}-{kind}.{'txt' if kind in ('train', 'full') else 'csv'}"
             for kind in ("train", "full", "features", "labels", "splits")}
    missing = [str(p) for p in files.values() if not p.exists()]
    if missing:
        pytest.skip(f"{name} dataset files missing: {missing}")
    return files


def run_preset(name, tmp_path, budget_seconds, floor):
    files = dataset_files(name)
    config = PRESETS[name]
    subs = tmp_path / "subs"
    t0 = time.perf_counter()
    run_sampler_cli("sample", "--graph", files["train"], "--method", "his-ff",
                    "--rate", str(config.sampling_rate), "--gamma", str(config.gamma),
                    "--count", "100", "--seed", "0", "--out-dir", subs, "--quiet")
    dataset = load_dataset(files["full"], files["features"], files["labels"],
                           files["splits"])
    result, _ = train(dataset, subs, subs / "node_coefficients.csv", config)
    elapsed = time.perf_counter() - t0
    best = max(result.test_f1_last, result.test_f1_best_val)
    print(f"[{'PASS' if best >= floor else 'FAIL'}] {name} end-to-end F1 "
          f"{best:.3f} (floor {floor}) in {elapsed:.0f}s")
    assert best >= floor
    assert elapsed < budget_seconds


def test_citeseer_end_to_end(tmp_path):
    run_preset("citeseer", tmp_path, budget_seconds=600, floor=0.71)


def test_pubmed_end_to_end(tmp_path):
    run_preset("pubmed", tmp_path, budget_seconds=1200, floor=0.87)
