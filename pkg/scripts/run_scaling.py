#!/usr/bin/env python3
"""Estimation error against sqrt(s* log d / n) for both mixture models.

Runs the default (s*, n) grid at d = 128 with 20 replicates per cell and
writes scaling_gmm.csv / scaling_mr.csv; the "mean" rows give one point
per cell, and a straight-line fit of err on x should be close to linear.
"""

import argparse
import pathlib

from truncem.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--replicates", type=int, default=20)
    args = parser.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for model in ("GMM", "MR"):
        out = outdir / f"scaling_{model.lower()}.csv"
        cli_main([
            "scaling", "--model", model, "--seed", str(args.seed),
            "--scaling-replicates", str(args.replicates), "--out", str(out),
        ])


if __name__ == "__main__":
    main()
