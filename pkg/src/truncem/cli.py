"""Command-line driver: trace | scaling | typeone | fit | infer.

Settings come from an optional JSON config file plus flag overrides;
the fully resolved config is echoed into every output file.
"""

import argparse
import json
import sys

from .harness import (
    ExperimentConfig,
    run_fit,
    run_infer,
    run_scaling,
    run_trace,
    run_typeone,
    write_csv,
    write_json,
)


def _add_common(parser):
    parser.add_argument("--model", choices=("GMM", "MR", "RMC"))
    parser.add_argument("--d", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--s-star", dest="s_star", type=int)
    parser.add_argument("--s-hat", dest="s_hat", type=int)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--p-m", dest="p_missing", type=float)
    parser.add_argument("--m-step", dest="m_step", choices=("exact", "gradient"))
    parser.add_argument("--eta", type=float)
    parser.add_argument("--T", dest="n_iter", type=int)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--alpha-index", dest="alpha_index", type=int)
    parser.add_argument("--replicates", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--rel-err", dest="rel_err", type=float)
    parser.add_argument("--resample", action="store_true", default=None)
    parser.add_argument("--out", required=False)
    parser.add_argument("--config", help="JSON config file; flags override it")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="truncem",
        description="Truncated high-dimensional EM experiments and inference",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("trace", "per-iteration optimization and estimation errors (CSV)"),
        ("scaling", "estimation error over an (s*, n) grid (CSV)"),
        ("typeone", "Monte-Carlo type-I errors of both tests (CSV + JSON)"),
        ("fit", "single fit (JSON)"),
        ("infer", "single fit plus score/Wald tests (JSON)"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        if name == "scaling":
            p.add_argument("--s-star-grid", dest="s_star_grid",
                           type=int, nargs="+")
            p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
            p.add_argument("--scaling-replicates", dest="scaling_replicates",
                           type=int)
            p.add_argument("--scaling-d", dest="scaling_d", type=int)
        if name in ("fit", "infer"):
            p.add_argument("--data", dest="data_csv",
                           help="external dataset CSV (see datagen docs)")
    return parser


def config_from_args(args):
    settings = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            settings.update(json.load(fh))
    valid = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(settings) - valid
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    for key in valid:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    for key in ("beta_values", "s_star_grid", "n_grid"):
        if key in settings and settings[key] is not None:
            settings[key] = tuple(settings[key])
    return ExperimentConfig(**settings)


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    if args.command == "trace":
        rows = run_trace(cfg)
        _emit_csv(rows, cfg)
    elif args.command == "scaling":
        rows = run_scaling(cfg)
        _emit_csv(rows, cfg)
    elif args.command == "typeone":
        rows, summary = run_typeone(cfg)
        if cfg.out:
            write_csv(rows, cfg.out + ".csv")
            write_json(summary, cfg.out + ".json")
            print(f"wrote {cfg.out}.csv and {cfg.out}.json")
        del summary["config"]
        print(json.dumps(summary, indent=2))
    elif args.command == "fit":
        _emit_json(run_fit(cfg), cfg)
    elif args.command == "infer":
        _emit_json(run_infer(cfg), cfg)
    return 0


def _emit_csv(rows, cfg):
    if cfg.out:
        write_csv(rows, cfg.out)
        print(f"wrote {cfg.out} ({len(rows)} rows)")
    else:
        header = list(rows[0].keys())
        print(",".join(header))
        for row in rows:
            print(",".join(repr(v) if isinstance(v, float) else str(v)
                           for v in (row[k] for k in header)))


def _emit_json(obj, cfg):
    if cfg.out:
        write_json(obj, cfg.out)
        print(f"wrote {cfg.out}")
    else:
        json.dump(obj, sys.stdout, indent=2)
        print()


if __name__ == "__main__":
    sys.exit(main())
