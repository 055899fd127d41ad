"""PEIM with lexicographic (A, then B) ranking versus the max-normalised sum A/maxA + B/maxB."""
import argparse

import numpy as np

from dwrosn.graph import hop_matrix
from dwrosn.las import peim_assign, substream
from dwrosn.metrics import utilization
from dwrosn.orbital import ConstellationSpec
from dwrosn.topology import NodeSet, build_potential_matrix, is_connected


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("--runs", type=int, default=5)
    args = p.parse_args()

    spec = ConstellationSpec.reference()
    nodes = NodeSet.for_constellation(spec)
    potential = build_potential_matrix(spec, None, args.slot * 2000.0, 2000.0)
    n = spec.n_sats
    for ranking in ("lexicographic", "sum"):
        for k in range(args.runs):
            snap = peim_assign(potential, nodes, substream(k), ranking=ranking)
            H = hop_matrix(snap)
            hbar = H.sum() / (n * (n - 1)) if is_connected(snap) else np.nan
            print(f"{ranking:13} run {k}: hbar {hbar:.3f} diameter {H.max()} alpha {utilization(snap):.4f}")


if __name__ == "__main__":
    main()
