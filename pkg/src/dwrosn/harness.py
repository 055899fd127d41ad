"""Experiment orchestration and table export."""
from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .graph import hop_matrix
from .las import CandidatePool, Scheme, candidate_pool, substream
from .metrics import MetricsReport
from .orbital import positions
from .rwa import delay_series, route_table, rwa_run
from .topology import NodeSet, PotentialLinkMatrix, build_potential_matrix, link_census, write_edge_list

log = logging.getLogger(__name__)

SCHEME_CODE = {Scheme.PEIM: 0, Scheme.ACT: 1, Scheme.GREEDY: 2}
CONNECTIVITY_HOPS = tuple(range(1, 11))

COLUMNS = {
    "census": ("t", "class", "visible", "potential"),
    "census_nodes": ("t", "node", "class", "visible", "potential"),
    "topo_metrics": ("slot", "scheme", "alpha", "hbar"),
    "pool": ("slot", "scheme", "count", "hbar_min", "hbar_max", "hbar_selected", "discarded"),
    "connectivity": ("slot", "scheme", "max_hops", "beta"),
    "hopdist": ("slot", "scheme", "hops", "fraction"),
    "wavelength": ("slot", "scheme", "rep", "n_lambda"),
    "wavelength_hops": ("slot", "scheme", "max_hops", "rep", "n_lambda", "beta", "unserved"),
    "delay": ("slot", "scheme", "tau_s", "mean_delay_ms"),
    "sweep_hbar": ("slot", "d_geo", "alpha", "hbar"),
    "sweep_rwa": ("slot", "d_geo", "max_hops", "beta", "n_lambda_mean", "n_lambda_min", "n_lambda_max"),
    "table2": ("scheme", "hops", "fraction", "alpha", "hbar"),
    "table3": ("max_hops", "d_geo", "beta", "n_lambda_mean"),
}


def _hops_label(h):
    return "inf" if h is None else h


@dataclass
class CellResult:
    """Everything computed for one (slot, scheme, d_geo) cell."""

    slot: int
    scheme: Scheme
    d_geo: int
    pool: CandidatePool
    metrics: MetricsReport
    n_lambda: dict = field(default_factory=dict)  # max_hops -> [per rep]
    unserved: dict = field(default_factory=dict)
    beta_rwa: dict = field(default_factory=dict)
    delay_taus: np.ndarray | None = None
    delay_ms: np.ndarray | None = None  # mean over reps, per tau

    @property
    def snapshot(self):
        return self.pool.best


def slot_window(config: ExperimentConfig, slot: int) -> tuple[float, float]:
    return slot * config.dt_s, config.dt_s


def potential_for_slot(config: ExperimentConfig, slot: int) -> PotentialLinkMatrix:
    t, dt = slot_window(config, slot)
    return build_potential_matrix(config.constellation(), None, t, dt, config.step_s)


def _scheme_key(scheme: Scheme, d_geo: int, config: ExperimentConfig) -> int:
    code = SCHEME_CODE[scheme]
    return code if d_geo == config.d_geo else 10 * d_geo + code


def run_cell(
    config: ExperimentConfig,
    slot: int,
    scheme: Scheme,
    potential: PotentialLinkMatrix,
    d_geo: int | None = None,
    with_rwa: bool = True,
) -> CellResult:
    d_geo = config.d_geo if d_geo is None else d_geo
    spec = config.constellation()
    nodes = NodeSet.for_constellation(spec, config.d_leo, d_geo)
    x = _scheme_key(scheme, d_geo, config)
    pool = candidate_pool(scheme, potential, nodes, config.count, (config.seed, slot, x, 0), config.peim_ranking)
    log.info(
        "slot %d %s d_geo=%d: pool hbar min %.4f max %.4f (selected %.4f, %d discarded)",
        slot, scheme.value, d_geo, pool.hbar.min(), pool.hbar.max(), pool.hbar[pool.selected], pool.discarded,
    )
    snap = pool.best
    metrics = MetricsReport.of(snap, CONNECTIVITY_HOPS)
    cell = CellResult(slot, scheme, d_geo, pool, metrics)
    if not with_rwa:
        return cell
    t, dt = slot_window(config, slot)
    routes = route_table(snap, None, config.k_cap, spec, t)
    taus = t + np.arange(0.0, dt, config.delay_step_s)
    series = []
    for h in config.max_hops:
        demands, unserved = [], []
        for rep in range(config.reps):
            res = rwa_run(snap, h, config.k_cap, t, substream(config.seed, slot, x, 1, rep), spec, routes)
            demands.append(res.n_lambda)
            unserved.append(len(res.unserved))
            if h is None:
                series.append(delay_series(res, spec, taus))
        cell.n_lambda[h] = demands
        cell.unserved[h] = unserved
        cell.beta_rwa[h] = res.beta
        metrics.add_wavelengths(h, demands)
    if series:
        cell.delay_taus = taus
        cell.delay_ms = np.mean(series, axis=0)
    return cell


def _worker_count() -> int:
    raw = os.environ.get("DWROSN_THREADS", "").strip()
    n = int(raw) if raw else 0
    return n if n > 0 else (os.cpu_count() or 1)


def _run_cells(config, jobs, potentials, with_rwa=True) -> list[CellResult]:
    workers = min(_worker_count(), len(jobs))
    if workers <= 1:
        return [run_cell(config, s, sch, potentials[s], d, with_rwa) for s, sch, d in jobs]
    with ProcessPoolExecutor(workers) as ex:
        futures = [ex.submit(run_cell, config, s, sch, potentials[s], d, with_rwa) for s, sch, d in jobs]
        return [f.result() for f in futures]


@dataclass
class ReportBundle:
    tables: dict[str, list[tuple]] = field(default_factory=lambda: {k: [] for k in COLUMNS})
    cells: list[CellResult] = field(default_factory=list)
    sweep: list[CellResult] = field(default_factory=list)

    def add(self, name: str, row: tuple) -> None:
        self.tables[name].append(row)


def census_rows(config: ExperimentConfig, slots, potentials=None, bundle: ReportBundle | None = None) -> ReportBundle:
    bundle = bundle or ReportBundle()
    spec = config.constellation()
    for s in slots:
        t, dt = slot_window(config, s)
        pot = potentials[s] if potentials else None
        census = link_census(spec, None, t, dt, config.step_s, pot)
        for cls, (vis, potn) in census.totals().items():
            bundle.add("census", (t, cls.value, vis, potn))
        for sat in spec.satellites:
            for cls, (vis, potn) in census.node(sat.index).items():
                bundle.add("census_nodes", (t, sat.label, cls.value, vis, potn))
    return bundle


def _emit_cell(bundle: ReportBundle, cell: CellResult) -> None:
    s, name, m = cell.slot, cell.scheme.value, cell.metrics
    pool = cell.pool
    bundle.add("topo_metrics", (s, name, m.alpha, m.hbar))
    bundle.add("pool", (s, name, len(pool.candidates), float(pool.hbar.min()), float(pool.hbar.max()),
                        float(pool.hbar[pool.selected]), pool.discarded))
    for h, beta in m.beta.items():
        bundle.add("connectivity", (s, name, h, beta))
    for hops, frac in sorted(m.hop_distribution.items()):
        bundle.add("hopdist", (s, name, hops, frac))
    for h, demands in cell.n_lambda.items():
        for rep, nl in enumerate(demands):
            bundle.add("wavelength_hops", (s, name, _hops_label(h), rep, nl, cell.beta_rwa[h], cell.unserved[h][rep]))
    if cell.n_lambda:
        full = None if None in cell.n_lambda else max(cell.n_lambda)
        for rep, nl in enumerate(cell.n_lambda[full]):
            bundle.add("wavelength", (s, name, rep, nl))
    if cell.delay_ms is not None:
        for tau, dl in zip(cell.delay_taus, cell.delay_ms):
            bundle.add("delay", (s, name, float(tau), float(dl)))


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None, fmt: str = "csv") -> ReportBundle:
    """Census, topology generation, metrics, RWA and the GEO-degree sweep for every slot."""
    if not config.schemes:
        raise ValueError("no schemes configured")
    slots = config.slot_indices
    potentials = {s: potential_for_slot(config, s) for s in slots}
    bundle = census_rows(config, slots, potentials)

    jobs = [(s, sch, config.d_geo) for s in slots for sch in config.schemes]
    bundle.cells = _run_cells(config, jobs, potentials)
    for cell in bundle.cells:
        _emit_cell(bundle, cell)

    sweep_jobs = [(s, Scheme.PEIM, d) for s in slots for d in config.sweep_d_geo
                  if not (d == config.d_geo and Scheme.PEIM in config.schemes)]
    extra = {(c.slot, c.d_geo): c for c in _run_cells(config, sweep_jobs, potentials)}
    for s in slots:
        for d in config.sweep_d_geo:
            cell = extra.get((s, d))
            if cell is None:
                cell = next(c for c in bundle.cells if c.slot == s and c.scheme is Scheme.PEIM)
            bundle.sweep.append(cell)
            bundle.add("sweep_hbar", (s, d, cell.metrics.alpha, cell.metrics.hbar))
            for h, demands in cell.n_lambda.items():
                bundle.add("sweep_rwa", (s, d, _hops_label(h), cell.beta_rwa[h],
                                         float(np.mean(demands)), min(demands), max(demands)))

    first = slots[0]
    for cell in bundle.cells:
        if cell.slot == first:
            for hops, frac in sorted(cell.metrics.hop_distribution.items()):
                bundle.add("table2", (cell.scheme.value, hops, frac, cell.metrics.alpha, cell.metrics.hbar))
    for cell in bundle.sweep:
        if cell.slot == first:
            for h in config.max_hops:
                if h in cell.n_lambda:
                    bundle.add("table3", (_hops_label(h), cell.d_geo, cell.beta_rwa[h], float(np.mean(cell.n_lambda[h]))))

    if out_dir is not None:
        write_bundle(bundle, out_dir, fmt)
        topo = Path(out_dir) / "topologies"
        topo.mkdir(parents=True, exist_ok=True)
        for cell in bundle.cells:
            write_edge_list(cell.snapshot, topo / f"slot{cell.slot}_{cell.scheme.value}.txt")
        (Path(out_dir) / "config.txt").write_text(config.to_text())
    return bundle


def write_table(path: Path, columns, rows, fmt: str = "csv") -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(json.dumps([dict(zip(columns, r)) for r in rows], indent=1) + "\n")
    elif fmt == "csv":
        path = path.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    return path


def write_bundle(bundle: ReportBundle, out_dir: str | Path, fmt: str = "csv", names=None) -> list[Path]:
    out = Path(out_dir)
    written = []
    for name in names or COLUMNS:
        rows = bundle.tables[name]
        if rows or names:
            written.append(write_table(out / name, COLUMNS[name], rows, fmt))
    return written


def propagate_rows(config: ExperimentConfig, t0: float, t1: float, step: float):
    spec = config.constellation()
    times = np.arange(t0, t1, step)
    pos = positions(spec, times)
    for k, t in enumerate(times):
        for sat in spec.satellites:
            x, y, z = pos[k, sat.index]
            yield (float(t), sat.label, float(x), float(y), float(z))
