#!/usr/bin/env python3
"""Sweep the eavesdropper-region edge length (uncertainty size).

Reproduces the uncertainty-vs-rate trend: the robust worst-case secrecy rate
is non-increasing as the square regions grow around their fixed centers.
Writes results.csv into --out (default out/).
"""

import argparse
import json
import sys
import tempfile

from secbeam.cli import main


def run() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mode", choices=["ue", "ce"], default="ue")
    parser.add_argument("--out", default="out")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--edges", default="50,100,150,200",
        help="comma-separated edge lengths in km, strictly increasing",
    )
    parser.add_argument(
        "--schemes", default="robust",
        help="comma-separated subset of robust,mrt,nonrobust",
    )
    args = parser.parse_args()
    config = {
        "sweep": {
            "kind": "region_edge_km",
            "values": [float(v) for v in args.edges.split(",")],
        }
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(config, fh)
        cfg_path = fh.name
    argv = [
        "sweep", "--config", cfg_path, "--mode", args.mode,
        "--out", args.out, "--schemes", args.schemes,
    ]
    if args.seed is not None:
        argv += ["--seed", str(args.seed)]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
