import os
from os import path

import click
import numpy as np

from uabs import APPNAME, PYPI_NAME, __version__
from uabs.cli import reports_errors, setup_logging, load_run_config, write_outputs
from uabs.modules.comps import MetaConfig
from uabs.modules.comps.actions import MetaGradientCheckAction
from uabs.modules.env.data_loader import save_task_manifest
from uabs.modules.harness.actions import RunToyAction, RunUrbanAction, urban_task_sequence
from uabs.modules.harness.calc_lib import summarize
from uabs.modules.harness.data_loader import read_metrics, export_table

FORMATS = click.Choice(["csv", "json"])

def run_options(fn):
    for option in reversed([
        click.option("--config", "config_fpath", type=click.Path(exists=True, dir_okay=False), help="Flat key-value YAML overriding the scenario preset"),
        click.option("--out", default="metrics.csv", show_default=True, help="Metrics table to write"),
        click.option("--format", "fmt", type=FORMATS, default="csv", show_default=True),
        click.option("--jobs", type=int, default=1, show_default=True, help="(method, seed) jobs run in parallel"),
        click.option("--trajectories", type=click.Path(dir_okay=False), help="CSV of the first-episode UABS track per task"),
        click.option("--checkpoint-dir", type=click.Path(file_okay=False), help="Final policy of every (method, seed)"),
        click.option("--archive-dir", type=click.Path(file_okay=False), help="CoMPS experience archive of every seed"),
        click.option("--train-log-dir", type=click.Path(file_okay=False), help="Per-task training logs"),
    ]):
        fn = option(fn)
    return fn

@click.group()
@click.version_option(__version__, package_name=PYPI_NAME, prog_name=APPNAME)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
def main(verbose: bool):
    """Continual meta-RL for an aerial base station collecting packets."""
    setup_logging(verbose)

@main.command()
@run_options
@reports_errors
def toy(config_fpath, out, fmt, jobs, trajectories, checkpoint_dir, archive_dir, train_log_dir):
    """Alternating clockwise / counterclockwise perimeter tasks."""
    cfg = load_run_config("toy", config_fpath)
    result = RunToyAction().run(cfg, jobs)
    write_outputs(result, cfg, out, fmt, trajectories, checkpoint_dir, archive_dir, train_log_dir)

@main.command()
@run_options
@click.option("--traces", "traces_dir", type=click.Path(exists=True, file_okay=False), help="Directory of task manifests")
@click.option("--gen-seed", type=int, help="Seed of the synthetic task generator (default 0)")
@reports_errors
def urban(config_fpath, out, fmt, jobs, trajectories, checkpoint_dir, archive_dir, train_log_dir, traces_dir, gen_seed):
    """Urban tasks from trace manifests or the synthetic generator."""
    if traces_dir is not None and gen_seed is not None:
        raise click.UsageError("--traces and --gen-seed are exclusive")
    if traces_dir is None and gen_seed is None:
        gen_seed = 0
    cfg = load_run_config("urban", config_fpath)
    result = RunUrbanAction().run(cfg, traces_dir, gen_seed, jobs)
    write_outputs(result, cfg, out, fmt, trajectories, checkpoint_dir, archive_dir, train_log_dir)

@main.command("gen-tasks")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--k", "k", type=int, required=True, help="Number of tasks")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_fpath", type=click.Path(exists=True, dir_okay=False))
@click.option("--as-traces", is_flag=True, help="Write GUE motion as trace CSVs next to the manifests")
@reports_errors
def gen_tasks(out_dir, k, seed, config_fpath, as_traces):
    """Write K synthetic urban task manifests."""
    cfg = load_run_config("urban", config_fpath)
    cfg.apply_construct_config({"K": k})
    os.makedirs(out_dir, exist_ok=True)
    for i, task in enumerate(urban_task_sequence(cfg, gen_seed=seed)):
        fpath = path.join(out_dir, f"task_{i:03d}.yaml")
        save_task_manifest(task, fpath, path.join(out_dir, f"task_{i:03d}.csv") if as_traces else None)
    click.echo(f"{k} task manifests written to {out_dir}")

@main.command("summarize")
@click.argument("in_fpath", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True)
@click.option("--format", "fmt", type=FORMATS, default="csv", show_default=True)
@reports_errors
def summarize_cmd(in_fpath, out, fmt):
    """Mean and std across seeds per (method, task index)."""
    rows, metadata = read_metrics(in_fpath)
    export_table(summarize(rows), out, fmt, metadata)

@main.command("meta-check")
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--eta", type=float, default=0.001, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@reports_errors
def meta_check(trials, eta, seed):
    """Compare first-order and finite-difference meta-gradients on tiny policies."""
    cosines = MetaGradientCheckAction().run(MetaConfig(eta=eta), trials=trials, seed=seed)
    click.echo(f"mean cosine {np.mean(cosines):.6f} (min {np.min(cosines):.6f}) over {trials} trials")

if __name__=="__main__":
    main()
