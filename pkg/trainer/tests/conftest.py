import shutil
import subprocess
import sys

import numpy as np
import pytest

HISAMPLE = shutil.which("hisample")


def run_sampler_cli(*args):
    """Invoke the sampling toolkit through its public CLI only."""
    if HISAMPLE:
        cmd = [HISAMPLE, *map(str, args)]
    else:
        cmd = [sys.executable, "-m", "hisample.cli", *map(str, args)]
    subprocess.run(cmd, check=True, capture_output=True)


@pytest.fixture(scope="session")
def synthetic_case(tmp_path_factory):
    """A learnable two-class node classification task on a synthetic graph.

    The graph and the subgraphs come from the sampler CLI; features are
    class-separated gaussian blobs so a small model converges in seconds.
    """
    root = tmp_path_factory.mktemp("synthetic")
    gen = root / "gen"
    run_sampler_cli("generate", "--model", "ba", "--nodes", "300", "--m", "3",
                    "--seed", "1", "--out-dir", gen, "--quiet")
    edges = gen / "edges.txt"

    rng = np.random.default_rng(7)
    n = 300
    labels = rng.integers(0, 2, size=n)
    feats = rng.normal(0, 1.0, size=(n, 8)).astype(np.float32)
    feats[:, 0] += np.where(labels == 1, 2.0, -2.0)
    feats[:, 1] -= np.where(labels == 1, 2.0, -2.0)
    features_path = root / "features.csv"
    np.savetxt(features_path, feats, delimiter=",")
    labels_path = root / "labels.csv"
    np.savetxt(labels_path, np.column_stack([np.arange(n), labels]), fmt="%d", delimiter=",")

    split = rng.permutation(n)
    names = np.empty(n, dtype=object)
    names[split[:180]] = "train"
    names[split[180:240]] = "val"
    names[split[240:]] = "test"
    splits_path = root / "splits.csv"
    splits_path.write_text("node_id,split\n" +
                           "\n".join(f"{i},{names[i]}" for i in range(n)) + "\n")

    subs = root / "subs"
    run_sampler_cli("sample", "--graph", edges, "--method", "his-ff",
                    "--rate", "0.2", "--count", "30", "--seed", "3",
                    "--out-dir", subs, "--quiet")
    return {
        "edges": edges,
        "features": features_path,
        "labels": labels_path,
        "splits": splits_path,
        "subgraphs": subs,
        "coeffs": subs / "node_coefficients.csv",
    }
