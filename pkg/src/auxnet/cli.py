"""Command-line experiment driver.

Subcommands: run (one experiment cell), sweep-p (availability sweep),
sweep-b (base-feature sweep), gradcheck (finite-difference verification of
the backward pass). All results land as CSVs under --out-dir.
"""

from __future__ import annotations

import functools

import click

from .errors import ContractViolation, DataFormatError
from .gradcheck import TINY_CONFIG, run_gradient_check
from .harness import ExperimentConfig, run_experiment, sweep_B, sweep_p


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _friendly_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (ContractViolation, DataFormatError, OSError) as exc:
            raise click.ClickException(str(exc))
    return wrapper


def _common_options(f):
    options = [
        click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False),
                     help="UCR-format data file (label first, tab or comma separated)."),
        click.option("--seeds", default="0,1,2,3,4", show_default=True,
                     help="Comma-separated seeds; one run per seed."),
        click.option("--eta", type=float, default=0.01, show_default=True,
                     help="Learning rate."),
        click.option("--beta", "discount", type=float, default=0.99, show_default=True,
                     help="Hedge discount rate."),
        click.option("--lambda", "smoothing", type=float, default=0.2, show_default=True,
                     help="Hedge smoothing (weight floor) parameter."),
        click.option("--layers-base", type=int, default=5, show_default=True),
        click.option("--layers-end", type=int, default=5, show_default=True),
        click.option("--nodes", type=int, default=50, show_default=True,
                     help="Hidden nodes per layer."),
        click.option("--out-dir", type=click.Path(file_okay=False), default="out",
                     show_default=True),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _experiment_config(dataset, seeds, eta, discount, smoothing, layers_base,
                       layers_end, nodes, out_dir, **kwargs) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=dataset, seeds=_parse_ints(seeds), eta=eta, discount=discount,
        smoothing=smoothing, base_layers=layers_base, end_layers=layers_end,
        nodes=nodes, out_dir=out_dir, **kwargs,
    )


@click.group()
def main():
    """Online deep learning with intermittently available auxiliary features."""


@main.command()
@_common_options
@click.option("--mode", type=click.Choice(["auxnet", "odl"]), default="auxnet",
              show_default=True)
@click.option("--base-features", "num_base", type=int, default=12, show_default=True,
              help="Number of leading features treated as base.")
@click.option("--prob", type=float, default=1.0, show_default=True,
              help="Availability probability of each auxiliary feature.")
@click.option("--schedule-in", type=click.Path(exists=True, dir_okay=False),
              help="Replay availability from this schedule file.")
@click.option("--schedule-out", type=click.Path(dir_okay=False),
              help="Export the availability schedule used (per seed).")
@_friendly_errors
def run(mode, num_base, prob, schedule_in, schedule_out, **common):
    """Run one experiment cell across seeds and write its CSVs."""
    cfg = _experiment_config(mode=mode, num_base=num_base, p=prob,
                             schedule_in=schedule_in, schedule_out=schedule_out,
                             **common)
    results = run_experiment(cfg)
    for seed, m in zip(cfg.seeds, results):
        click.echo(f"seed {seed}: accuracy {m.avg_accuracy:.4f}  loss {m.avg_loss:.4f}")
    accs = [m.avg_accuracy for m in results]
    losses = [m.avg_loss for m in results]
    click.echo(f"mean over {len(results)} seed(s): "
               f"accuracy {sum(accs) / len(accs):.4f}  loss {sum(losses) / len(losses):.4f}")


@main.command(name="sweep-p")
@_common_options
@click.option("--base-features", "num_base", type=int, default=12, show_default=True)
@click.option("--prob", default="0.5,0.6,0.7,0.8,0.9,0.99,1.0", show_default=True,
              help="Comma-separated availability probabilities.")
@_friendly_errors
def sweep_p_cmd(num_base, prob, **common):
    """Sweep the auxiliary availability probability."""
    cfg = _experiment_config(num_base=num_base, **common)
    table = sweep_p(cfg, _parse_floats(prob))
    for p, stats in table.items():
        click.echo(f"p={p}: accuracy {stats['mean_accuracy']:.4f}  "
                   f"loss {stats['mean_loss']:.4f}")
    click.echo(f"wrote {cfg.out_dir}/sweep_p.csv")


@main.command(name="sweep-b")
@_common_options
@click.option("--base-features", "b_values", default="1,4,8,12,16,20,23",
              show_default=True, help="Comma-separated base-feature counts.")
@click.option("--prob", type=float, default=0.9, show_default=True)
@_friendly_errors
def sweep_b_cmd(b_values, prob, **common):
    """Sweep the number of base features, comparing against the chain baseline."""
    cfg = _experiment_config(**common)
    table = sweep_B(cfg, _parse_ints(b_values), prob)
    for b, stats in table.items():
        click.echo(f"B={b}: auxnet loss {stats['auxnet']['mean_loss']:.4f}  "
                   f"odl loss {stats['odl']['mean_loss']:.4f}")
    click.echo(f"wrote {cfg.out_dir}/sweep_b.csv")


@main.command()
@click.option("--tolerance", type=float, default=1e-5, show_default=True,
              help="Maximum allowed relative error.")
@click.option("--seed", type=int, default=7, show_default=True)
@_friendly_errors
def gradcheck(tolerance, seed):
    """Verify analytic gradients against central finite differences."""
    reports = run_gradient_check(TINY_CONFIG, seed=seed)
    failed = False
    for r in reports:
        status = "ok" if r["max_rel_error"] <= tolerance else "FAIL"
        if status == "FAIL":
            failed = True
        click.echo(f"active_aux={r['active_aux'] or '()'} label={r['label']} "
                   f"max_rel_error={r['max_rel_error']:.3e}  {status}")
    if failed:
        raise click.ClickException("gradient check failed")
    click.echo("all gradient checks passed")


if __name__ == "__main__":
    main()
