"""Command line entry point: ``dwrosn {propagate,census,assign,rwa,experiment}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig
from .harness import (
    COLUMNS, ReportBundle, _emit_cell, census_rows, potential_for_slot, propagate_rows, run_cell,
    run_experiment, slot_window, write_bundle, write_table,
)
from .las import InfeasibleAssignment, Scheme
from .topology import write_edge_list


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value experiment configuration")
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--count", type=int, help="candidate topologies per slot (overrides las.count)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="dwrosn", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    prop = sub.add_parser("propagate", parents=[common], help="satellite positions over a slot")
    prop.add_argument("--slot", type=int, default=0)
    prop.add_argument("--step", type=float, default=100.0, help="sampling step in seconds")
    cen = sub.add_parser("census", parents=[common], help="visible / potential link counts")
    cen.add_argument("--slot", type=int, help="single slot (default: every slot)")
    asg = sub.add_parser("assign", parents=[common], help="per-slot topology for one scheme")
    asg.add_argument("--scheme", choices=[s.value for s in Scheme], default="peim")
    asg.add_argument("--slot", type=int, help="single slot (default: every slot)")
    rwa = sub.add_parser("rwa", parents=[common], help="wavelength demand, connectivity and delay")
    rwa.add_argument("--scheme", choices=[s.value for s in Scheme], default="peim")
    rwa.add_argument("--slot", type=int, default=0)
    exp = sub.add_parser("experiment", parents=[common], help="full pipeline")
    exp.add_argument("--scheme", action="append", choices=[s.value for s in Scheme],
                     help="restrict to these schemes (repeatable)")
    exp.add_argument("--slot", type=int, action="append", help="restrict to these slots (repeatable)")
    return p


def _config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    return config.with_overrides(seed=args.seed, count=args.count)


def _slots(config: ExperimentConfig, slot) -> list[int]:
    if slot is None:
        return list(config.slot_indices)
    if not 0 <= slot < config.n_slots:
        raise ConfigError(f"slot {slot} outside the horizon (0..{config.n_slots - 1})")
    return [slot]


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        config = _config(args)
        out: Path = args.out
        if args.command == "propagate":
            (slot,) = _slots(config, args.slot)
            t, dt = slot_window(config, slot)
            rows = list(propagate_rows(config, t, t + dt, args.step))
            path = write_table(out / "positions", ("t", "sat", "x_km", "y_km", "z_km"), rows, args.format)
            print(path)
        elif args.command == "census":
            bundle = census_rows(config, _slots(config, args.slot))
            write_bundle(bundle, out, args.format, names=("census", "census_nodes"))
            for t, cls, vis, pot in bundle.tables["census"]:
                print(f"t={t:g} {cls}: visible {vis} potential {pot}")
        elif args.command in ("assign", "rwa"):
            scheme = Scheme(args.scheme)
            slots = _slots(config, args.slot)
            bundle = ReportBundle()
            for s in slots:
                cell = run_cell(config, s, scheme, potential_for_slot(config, s), with_rwa=args.command == "rwa")
                _emit_cell(bundle, cell)
                (out / "topologies").mkdir(parents=True, exist_ok=True)
                write_edge_list(cell.snapshot, out / "topologies" / f"slot{s}_{scheme.value}.txt")
                used, budget = int(cell.snapshot.used_terminals.sum()), int(cell.snapshot.degree.sum())
                print(f"slot {s} {scheme.value}: alpha={cell.metrics.alpha:.4f} hbar={cell.metrics.hbar:.4f} "
                      f"terminals {used}/{budget}")
            names = ("topo_metrics", "pool", "connectivity", "hopdist")
            if args.command == "rwa":
                names += ("wavelength", "wavelength_hops", "delay")
            write_bundle(bundle, out, args.format, names=names)
        elif args.command == "experiment":
            if args.scheme:
                config = config.with_overrides(schemes=tuple(Scheme(s) for s in dict.fromkeys(args.scheme)))
            if args.slot:
                config = config.with_overrides(slots=tuple(_slots(config, s)[0] for s in dict.fromkeys(args.slot)))
            run_experiment(config, out, args.format)
            print(out)
    except (ConfigError, InfeasibleAssignment, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2 if isinstance(exc, ConfigError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
