"""Full reference experiment (10 slots, count=100, 10 RWA reps, all schemes).

Takes hours on one core; set DWROSN_THREADS to spread (slot, scheme) cells over processes.
"""
import argparse
import logging

import numpy as np

from dwrosn.config import ExperimentConfig
from dwrosn.harness import run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="out/reference")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--slots", type=int, nargs="*")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = ExperimentConfig(seed=args.seed, count=args.count, slots=tuple(args.slots) if args.slots else None)
    bundle = run_experiment(cfg, args.out)

    print(f"{'scheme':8} {'alpha':>7} {'hbar':>7} {'N_lambda':>9} {'delay ms':>9}")
    for scheme in cfg.schemes:
        cells = [c for c in bundle.cells if c.scheme is scheme]
        alpha = np.mean([c.metrics.alpha for c in cells])
        hbar = np.mean([c.metrics.hbar for c in cells])
        demand = np.mean([np.mean(c.n_lambda[None]) for c in cells])
        delay = np.mean([np.mean(c.delay_ms) for c in cells])
        print(f"{scheme.value:8} {alpha:7.4f} {hbar:7.3f} {demand:9.1f} {delay:9.1f}")


if __name__ == "__main__":
    main()
