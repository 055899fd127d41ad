"""GEO terminal-count sweep on one slot: H-bar, connectivity and wavelength demand per d_G."""
import argparse

import numpy as np

from dwrosn.config import ExperimentConfig
from dwrosn.harness import potential_for_slot, run_cell
from dwrosn.las import Scheme


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--degrees", type=int, nargs="+", default=[5, 6, 7, 8])
    args = p.parse_args()

    hops = (1, 2, 3, 4, 5)
    cfg = ExperimentConfig(count=args.count, reps=args.reps, max_hops=hops, seed=args.seed)
    potential = potential_for_slot(cfg, args.slot)
    print("d_G  hbar    " + "  ".join(f"beta{h}  " for h in hops) + "  " + "  ".join(f"Nl{h:<4}" for h in hops))
    for d in args.degrees:
        cell = run_cell(cfg, args.slot, Scheme.PEIM, potential, d)
        betas = "  ".join(f"{cell.metrics.beta[h]:.4f}" for h in hops)
        demand = "  ".join(f"{np.mean(cell.n_lambda[h]):6.1f}" for h in hops)
        print(f"{d:<4} {cell.metrics.hbar:.4f}  {betas}  {demand}")


if __name__ == "__main__":
    main()
