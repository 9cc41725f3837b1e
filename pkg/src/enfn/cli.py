"""Command line entry point: ``enfn run | gen | ls-presets``."""
import argparse
import os
import sys

from .errors import ConfigurationError
from .harness import (PRESETS, build_config, config_echo, emit_table, emit_trace,
                      parse_config_text, run_experiment)
from .signals import write_series_csv


def _config_from_args(args):
    if args.target in PRESETS:
        values = {"preset": args.target}
    elif os.path.isfile(args.target):
        with open(args.target) as fh:
            values = parse_config_text(fh.read())
    else:
        raise ConfigurationError(f"{args.target!r} is neither a preset nor a config file")
    overrides = {
        "p_sweep": args.p_sweep, "h": args.h, "alpha": args.alpha,
        "membership": args.membership, "q": args.q,
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = " ".join(map(str, value)) if isinstance(value, list) else str(value)
    out = values.pop("out", None)
    return build_config(values), args.out or out or "."


def cmd_run(args):
    config, out = _config_from_args(args)
    report = run_experiment(config)
    text, table_csv = emit_table(report)
    os.makedirs(out, exist_ok=True)
    files = {"table.txt": text, "table.csv": table_csv,
             "trace.csv": emit_trace(report), "config.echo": config_echo(config)}
    for name, content in files.items():
        with open(os.path.join(out, name), "w", newline="") as fh:
            fh.write(content)
    print(text, end="")
    print(f"best p = {report.best_p}; {report.duration:.2f} s; outputs in {out}")
    return 0


def cmd_gen(args):
    if args.preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {args.preset!r}")
    series, exo = PRESETS[args.preset].signal.generate()
    write_series_csv(args.out, series, exo)
    return 0


def cmd_ls_presets(args):
    for name, cfg in PRESETS.items():
        print(f"{name:14} n_points={cfg.signal.n_points:<6} "
              f"train={cfg.train_len:<5} test={cfg.test_len:<5} lags={list(cfg.window.lags)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="enfn", description="ENFN prediction experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or a key=value config file")
    run.add_argument("target", help="preset name or config file path")
    run.add_argument("--p-sweep", type=int, nargs="*", default=None)
    run.add_argument("--h", type=int)
    run.add_argument("--alpha", type=float)
    run.add_argument("--membership", choices=["triangular", "bspline"])
    run.add_argument("--q", type=int)
    run.add_argument("--out", help="output directory (default: current directory)")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="dump a preset's raw series as CSV")
    gen.add_argument("preset")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    ls = sub.add_parser("ls-presets", help="list built-in experiments")
    ls.set_defaults(func=cmd_ls_presets)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, OSError) as exc:
        print(f"enfn: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
