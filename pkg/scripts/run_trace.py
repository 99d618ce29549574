#!/usr/bin/env python3
"""Per-iteration convergence traces for both mixture models.

Writes trace_gmm.csv and trace_mr.csv (columns t, opt_error, est_error,
loglik) into the output directory; plot opt_error on a log scale to see
the geometric decay.
"""

import argparse
import pathlib

from truncem.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for model in ("GMM", "MR"):
        out = outdir / f"trace_{model.lower()}.csv"
        cli_main([
            "trace", "--model", model, "--T", "10",
            "--seed", str(args.seed), "--out", str(out),
        ])


if __name__ == "__main__":
    main()
