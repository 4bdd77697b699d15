#!/usr/bin/env python3
"""Download the public SNAP graphs used by the dataset-dependent tests.

Writes plain edge lists into the data directory (default ./data, or
$HISAMPLE_DATA_DIR). Needs outbound network access. The CiteSeer/Pubmed
training graphs are not plain downloads; see the README for how to export
them from the standard planetoid split.
"""

import argparse
import gzip
import os
import urllib.request
from pathlib import Path

SNAP = {
    "ca-GrQc.txt": "https://snap.stanford.edu/data/ca-GrQc.txt.gz",
    "web-Google.txt": "https://snap.stanford.edu/data/web-Google.txt.gz",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default=os.environ.get("HISAMPLE_DATA_DIR", "data"))
    ap.add_argument("--only", nargs="*", help="subset of file names to fetch")
    args = ap.parse_args()
    out = Path(args.data_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, url in SNAP.items():
        if args.only and name not in args.only:
            continue
        dest = out / name
        if dest.exists():
            print(f"{dest} already present")
            continue
        print(f"fetching {url}")
        payload = urllib.request.urlopen(url, timeout=120).read()
        dest.write_bytes(gzip.decompress(payload))
        print(f"wrote {dest}")


if __name__ == "__main__":
    main()
