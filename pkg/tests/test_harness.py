import csv
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from auxnet import AvailabilitySchedule, ContractViolation, reaggregate
from auxnet.cli import main
from auxnet.harness import ExperimentConfig, run_experiment, run_single, sweep_B, sweep_p
from auxnet.metrics import STEP_COLUMNS
from auxnet.stream import load_ucr


def small_cfg(italy_path, tmp_path, **overrides):
    """Desk-size network so harness tests stay quick."""
    defaults = dict(dataset=str(italy_path), num_base=12, p=0.8, seeds=(0, 1),
                    base_layers=2, end_layers=2, nodes=8, out_dir=str(tmp_path / "out"))
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_run_experiment_writes_step_and_summary_csvs(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path)
    results = run_experiment(cfg)
    assert len(results) == 2
    out = Path(cfg.out_dir)
    steps = sorted(out.glob("steps_auxnet_*.csv"))
    assert len(steps) == 2
    rows = read_csv(steps[0])
    assert rows[0] == STEP_COLUMNS
    assert len(rows) == 1096 + 1
    summary = read_csv(out / "summary_auxnet_B12_p0.8.csv")
    assert summary[0][-2:] == ["avg_accuracy", "avg_loss"]
    assert [r[10] for r in summary[1:]] == ["0", "1", "mean", "std"]


def test_step_csv_reaggregates_to_summary_exactly(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path, seeds=(3,))
    (metrics,) = run_experiment(cfg)
    step_file = next(Path(cfg.out_dir).glob("steps_auxnet_*.csv"))
    acc, loss = reaggregate(step_file)
    assert acc == metrics.avg_accuracy
    assert loss == metrics.avg_loss


def test_odl_mode_ignores_availability(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path, mode="odl", num_base=24, seeds=(0,))
    (metrics,) = run_experiment(cfg)
    assert np.all(metrics.num_active_aux == 0)
    assert (Path(cfg.out_dir) / "summary_odl_B24.csv").exists()


def test_schedule_export_then_replay_is_identical(italy_path, tmp_path):
    sched_path = tmp_path / "sched.txt"
    cfg1 = small_cfg(italy_path, tmp_path, seeds=(0,), schedule_out=str(sched_path),
                     out_dir=str(tmp_path / "a"))
    (m1,) = run_experiment(cfg1)
    cfg2 = small_cfg(italy_path, tmp_path, seeds=(0,), schedule_in=str(sched_path),
                     out_dir=str(tmp_path / "b"))
    (m2,) = run_experiment(cfg2)
    assert np.array_equal(m1.num_active_aux, m2.num_active_aux)
    assert np.array_equal(m1.predicted, m2.predicted)
    assert np.array_equal(m1.step_loss, m2.step_loss)
    sa = (Path(tmp_path / "a") / "summary_auxnet_B12_p0.8.csv").read_text()
    sb = (Path(tmp_path / "b") / "summary_auxnet_B12_p0.8.csv").read_text()
    assert sa == sb


def test_rerunning_a_seed_reproduces_results(italy_path, tmp_path):
    ds = load_ucr(italy_path)
    cfg = small_cfg(italy_path, tmp_path)
    a = run_single(cfg, ds, "auxnet", 12, 0.8, seed=7)
    b = run_single(cfg, ds, "auxnet", 12, 0.8, seed=7)
    assert np.array_equal(a.predicted, b.predicted)
    assert np.array_equal(a.step_loss, b.step_loss)


def test_sweep_p_degenerate_equals_run_experiment(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path, seeds=(1,))
    table = sweep_p(cfg, [0.8])
    (direct,) = run_experiment(cfg)
    assert table[0.8]["accuracy"][0] == direct.avg_accuracy
    assert table[0.8]["loss"][0] == direct.avg_loss
    rows = read_csv(Path(cfg.out_dir) / "sweep_p.csv")
    assert rows[0] == ["p", "seed", "avg_accuracy", "avg_loss"]
    assert [r[1] for r in rows[1:]] == ["1", "mean"]


def test_sweep_b_rejects_base_count_without_aux(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path)
    with pytest.raises(ContractViolation):
        sweep_B(cfg, [24], p=0.9)


def test_sweep_b_table_and_csv(italy_path, tmp_path):
    cfg = small_cfg(italy_path, tmp_path, seeds=(0,))
    table = sweep_B(cfg, [12], p=0.8)
    assert set(table[12]) == {"auxnet", "odl"}
    rows = read_csv(Path(cfg.out_dir) / "sweep_b.csv")
    assert rows[0] == ["B", "model", "seed", "avg_accuracy", "avg_loss"]
    assert len(rows) == 1 + 2 * 2  # per-seed + mean, for both models


def test_cli_run_and_gradcheck(italy_path, tmp_path):
    runner = CliRunner()
    out = tmp_path / "cli_out"
    result = runner.invoke(main, [
        "run", "--dataset", str(italy_path), "--mode", "odl",
        "--base-features", "24", "--seeds", "0", "--layers-base", "2",
        "--layers-end", "2", "--nodes", "8", "--out-dir", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert "accuracy" in result.output
    assert (out / "summary_odl_B24.csv").exists()

    result = runner.invoke(main, ["gradcheck"])
    assert result.exit_code == 0, result.output
    assert "all gradient checks passed" in result.output


def test_cli_reports_missing_dataset(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--dataset", str(tmp_path / "nope.tsv")])
    assert result.exit_code != 0
