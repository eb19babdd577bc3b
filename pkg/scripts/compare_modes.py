"""Train split and non-split arms of one config for several seeds and plot them together.

    python3 scripts/compare_modes.py --config ex2.json --seeds 0 1 2 --out runs/compare
"""

import argparse
import json
import logging

from mpsplit.config import ExperimentConfig, load_config
from mpsplit.runner import compare_modes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", required=True)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--epochs", type=int)
    ap.add_argument("--out", default="runs/compare")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    cfg = load_config(ExperimentConfig, args.config, {"epochs": args.epochs})
    summary = compare_modes(cfg, args.seeds, args.out)
    print(json.dumps(summary["runs"], indent=2))


if __name__ == "__main__":
    main()
