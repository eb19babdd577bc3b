"""Command-line entry point: ``mpsplit {train,analyze,synth,truncate-sweep}``."""

import argparse
import json
import logging
import sys

from . import runner
from .config import AnalyzeConfig, ExperimentConfig, SweepConfig, SynthConfig, load_config
from .errors import ConfigError, DataError, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

COMMANDS = {
    "train": (ExperimentConfig, "train a network, optionally with MP-guided layer splitting"),
    "analyze": (AnalyzeConfig, "MP/BEMA analysis of one weight matrix"),
    "synth": (SynthConfig, "alpha/beta sweeps of the edge estimator on synthetic spiked matrices"),
    "truncate-sweep": (SweepConfig, "test accuracy versus kept rank for one layer"),
}

OVERRIDES = ("alpha", "beta", "gamma", "epochs", "seed", "mode", "out")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="mpsplit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with run settings")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--epochs", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--mode", choices=["split", "non_split"])
        p.add_argument("--out")
    return parser


def _overrides(cls, args):
    fields = cls.__dataclass_fields__
    values = {}
    for key in OVERRIDES:
        value = getattr(args, key)
        if value is None:
            continue
        if key not in fields:
            raise ConfigError(f"--{key} does not apply to '{args.command}'")
        values[key] = value
    return values


def _run(args):
    cls, _ = COMMANDS[args.command]
    cfg = load_config(cls, args.config, _overrides(cls, args))
    if args.command == "train":
        net, curve = runner.run_training(cfg)
        last = curve.records[-1] if curve.records else None
        summary = {"out": cfg.out, "dims": net.dims,
                   "param_count": last.param_count if last else None,
                   "test_acc": last.test_acc if last else None}
    elif args.command == "analyze":
        report = runner.run_analyze(cfg)
        summary = {k: report[k] for k in ("sigma_hat_sq", "lambda_plus", "n_spikes", "n_small")}
        summary["fit"] = report["fit"]
        summary["out"] = cfg.out
    elif args.command == "synth":
        rows = runner.run_synth(cfg)
        summary = {"out": cfg.out, "rows": len(rows)}
    else:
        rows, mp_rank, baseline = runner.run_truncation_sweep(cfg)
        summary = {"out": cfg.out, "mp_rank": mp_rank, "untruncated_test_acc": baseline,
                   "ranks": [r["rank"] for r in rows]}
    print(json.dumps(summary, indent=2))


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, parse errors exit with EXIT_CONFIG
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
