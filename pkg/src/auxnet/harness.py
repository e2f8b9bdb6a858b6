"""Experiment driver: single runs, availability sweeps, base-feature sweeps.

Every run is identified by (mode, number of base features, availability
probability, seed). Results are written as long-format CSVs ready for any
plotting tool: a per-step file per run plus one summary file per
invocation, with per-seed rows followed by mean/std rows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractViolation
from .metrics import RunMetrics, write_step_csv
from .model import NetworkConfig, run_stream
from .odl import run_stream_odl
from .stream import AvailabilitySchedule, Dataset, base_only_stream, load_ucr, make_schedule, split_stream

SUMMARY_COLUMNS = ["dataset", "mode", "num_base", "p", "base_layers", "end_layers",
                   "nodes", "eta", "discount", "smoothing", "seed",
                   "avg_accuracy", "avg_loss"]


@dataclass
class ExperimentConfig:
    dataset: str
    mode: str = "auxnet"          # "auxnet" or "odl" (odl ignores p, uses base features only)
    num_base: int = 12
    p: float = 1.0
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    base_layers: int = 5
    end_layers: int = 5
    nodes: int = 50
    eta: float = 0.01
    discount: float = 0.99
    smoothing: float = 0.2
    out_dir: str | None = None
    schedule_in: str | None = None
    schedule_out: str | None = None

    def __post_init__(self):
        if self.mode not in ("auxnet", "odl"):
            raise ContractViolation(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ContractViolation(f"p must lie in [0, 1], got {self.p}")
        if not self.seeds:
            raise ContractViolation("need at least one seed")


def network_config(cfg: ExperimentConfig, ds: Dataset, seed: int, mode: str | None = None,
                   num_base: int | None = None) -> NetworkConfig:
    mode = mode or cfg.mode
    num_base = num_base if num_base is not None else cfg.num_base
    aux = 0 if mode == "odl" else ds.num_features - num_base
    return NetworkConfig(
        num_base_features=num_base,
        num_classes=ds.num_classes,
        base_layers=cfg.base_layers,
        aux_layers=aux,
        end_layers=cfg.end_layers,
        nodes_per_layer=cfg.nodes,
        eta=cfg.eta,
        discount=cfg.discount,
        smoothing=cfg.smoothing,
        seed=seed,
    )


def run_single(cfg: ExperimentConfig, ds: Dataset, mode: str, num_base: int,
               p: float, seed: int,
               schedule: AvailabilitySchedule | None = None) -> RunMetrics:
    """One (mode, B, p, seed) cell. Fresh model, no shared state."""
    net = network_config(cfg, ds, seed, mode=mode, num_base=num_base)
    if mode == "odl":
        return run_stream_odl(net, base_only_stream(ds, num_base))
    if schedule is None:
        schedule = make_schedule(len(ds), ds.num_features - num_base, p, seed)
    return run_stream(net, split_stream(ds, num_base, schedule))


def _step_csv_name(mode: str, num_base: int, p: float, seed: int) -> str:
    if mode == "odl":
        return f"steps_odl_B{num_base}_seed{seed}.csv"
    return f"steps_auxnet_B{num_base}_p{p}_seed{seed}.csv"


def _summary_row(cfg: ExperimentConfig, mode: str, num_base: int, p: float,
                 seed, acc: float, loss: float) -> list:
    return [Path(cfg.dataset).name, mode, num_base,
            "" if mode == "odl" else repr(float(p)),
            cfg.base_layers, cfg.end_layers, cfg.nodes,
            repr(cfg.eta), repr(cfg.discount), repr(cfg.smoothing),
            seed, repr(float(acc)), repr(float(loss))]


def _write_rows(path, header, rows) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def _mean_std_rows(cfg, mode, num_base, p, results) -> list[list]:
    accs = np.array([m.avg_accuracy for m in results])
    losses = np.array([m.avg_loss for m in results])
    return [
        _summary_row(cfg, mode, num_base, p, "mean", accs.mean(), losses.mean()),
        _summary_row(cfg, mode, num_base, p, "std", accs.std(), losses.std()),
    ]


def run_experiment(cfg: ExperimentConfig) -> list[RunMetrics]:
    """Run every seed of one experiment cell; write per-step and summary CSVs.

    With mode="odl" the first num_base features are the network's only
    inputs and the availability machinery is bypassed entirely.
    """
    ds = load_ucr(cfg.dataset)
    schedule_in = AvailabilitySchedule.load(cfg.schedule_in) if cfg.schedule_in else None
    out_dir = Path(cfg.out_dir) if cfg.out_dir else None
    results = []
    rows = []
    for seed in cfg.seeds:
        schedule = schedule_in
        if cfg.mode == "auxnet" and schedule is None:
            schedule = make_schedule(len(ds), ds.num_features - cfg.num_base, cfg.p, seed)
        if cfg.mode == "auxnet" and cfg.schedule_out:
            path = Path(cfg.schedule_out)
            if len(cfg.seeds) > 1:  # one schedule file per seed
                path = path.with_name(f"{path.stem}_seed{seed}{path.suffix}")
            path.parent.mkdir(parents=True, exist_ok=True)
            schedule.save(path)
        metrics = run_single(cfg, ds, cfg.mode, cfg.num_base, cfg.p, seed, schedule)
        results.append(metrics)
        rows.append(_summary_row(cfg, cfg.mode, cfg.num_base, cfg.p, seed,
                                 metrics.avg_accuracy, metrics.avg_loss))
        if out_dir:
            out_dir.mkdir(parents=True, exist_ok=True)
            write_step_csv(metrics, out_dir / _step_csv_name(cfg.mode, cfg.num_base, cfg.p, seed))
    rows.extend(_mean_std_rows(cfg, cfg.mode, cfg.num_base, cfg.p, results))
    if out_dir:
        if cfg.mode == "odl":
            name = f"summary_odl_B{cfg.num_base}.csv"
        else:
            name = f"summary_auxnet_B{cfg.num_base}_p{cfg.p}.csv"
        _write_rows(out_dir / name, SUMMARY_COLUMNS, rows)
    return results


def sweep_p(cfg: ExperimentConfig, p_values, seeds=None) -> dict[float, dict]:
    """Availability sweep at fixed num_base; one row per (p, seed) plus means.

    Returns {p: {"accuracy": per-seed array, "loss": per-seed array,
    "mean_accuracy": float, "mean_loss": float}} and writes sweep_p.csv.
    """
    seeds = tuple(seeds) if seeds is not None else cfg.seeds
    ds = load_ucr(cfg.dataset)
    table: dict[float, dict] = {}
    rows = []
    for p in p_values:
        accs, losses = [], []
        for seed in seeds:
            m = run_single(cfg, ds, "auxnet", cfg.num_base, p, seed)
            accs.append(m.avg_accuracy)
            losses.append(m.avg_loss)
            rows.append([repr(float(p)), seed, repr(m.avg_accuracy), repr(m.avg_loss)])
        accs, losses = np.array(accs), np.array(losses)
        rows.append([repr(float(p)), "mean", repr(accs.mean()), repr(losses.mean())])
        table[float(p)] = {"accuracy": accs, "loss": losses,
                           "mean_accuracy": float(accs.mean()),
                           "mean_loss": float(losses.mean())}
    if cfg.out_dir:
        _write_rows(Path(cfg.out_dir) / "sweep_p.csv",
                    ["p", "seed", "avg_accuracy", "avg_loss"], rows)
    return table


def sweep_B(cfg: ExperimentConfig, b_values, p: float, seeds=None) -> dict[int, dict]:
    """Base-feature sweep: for each B, run the model on B base features plus
    the remaining features as auxiliaries at probability p, and the chain
    baseline on the B base features alone.

    Returns {B: {"auxnet": stats, "odl": stats}} and writes sweep_b.csv.
    """
    seeds = tuple(seeds) if seeds is not None else cfg.seeds
    ds = load_ucr(cfg.dataset)
    for b in b_values:
        if not 1 <= b < ds.num_features:
            raise ContractViolation(
                f"B={b} leaves no auxiliary features (dataset has {ds.num_features})"
            )
    table: dict[int, dict] = {}
    rows = []
    for b in b_values:
        table[int(b)] = {}
        for mode in ("auxnet", "odl"):
            accs, losses = [], []
            for seed in seeds:
                m = run_single(cfg, ds, mode, b, p, seed)
                accs.append(m.avg_accuracy)
                losses.append(m.avg_loss)
                rows.append([b, mode, seed, repr(m.avg_accuracy), repr(m.avg_loss)])
            accs, losses = np.array(accs), np.array(losses)
            rows.append([b, mode, "mean", repr(accs.mean()), repr(losses.mean())])
            table[int(b)][mode] = {"accuracy": accs, "loss": losses,
                                   "mean_accuracy": float(accs.mean()),
                                   "mean_loss": float(losses.mean())}
    if cfg.out_dir:
        _write_rows(Path(cfg.out_dir) / "sweep_b.csv",
                    ["B", "model", "seed", "avg_accuracy", "avg_loss"], rows)
    return table
