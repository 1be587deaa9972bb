import functools
import logging
import os
from os import path

import click

from uabs.core.data import ConfigKeyError, ConfigValueError
from uabs.core.plugin import load_scenario_settings
from uabs.modules.comps import ArchiveError, ContinualConstraintError
from uabs.modules.comps.data_loader import archive_save
from uabs.modules.env import TraceFormatError
from uabs.modules.harness import RunConfig, InsufficientTasksError, EmptyMetricsError
from uabs.modules.harness.actions import ContinualResult
from uabs.modules.harness.data_loader import build_metadata, export_metrics, save_trajectories
from uabs.modules.policy import CheckpointError
from uabs.modules.policy.data_loader import save_checkpoint
from uabs.modules.reinforce.data_loader import save_training_log

DOMAIN_ERRORS = (
    ConfigKeyError, ConfigValueError, TraceFormatError, ArchiveError, CheckpointError,
    InsufficientTasksError, EmptyMetricsError, ContinualConstraintError, OSError,
)

def reports_errors(fn):
    # domain failures become a one-line diagnostic and a non-zero exit
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DOMAIN_ERRORS as e:
            raise click.ClickException(f"{type(e).__name__}: {e}") from e
    return wrapper

def setup_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

def load_run_config(scenario: str, config_fpath: str=None) -> RunConfig:
    settings = load_scenario_settings(scenario, config_fpath, known_keys=RunConfig.Keys())
    return RunConfig.FromSettings(settings, scenario)

def write_outputs(result: ContinualResult, cfg: RunConfig, out: str, fmt: str,
                  trajectories: str=None, checkpoint_dir: str=None, archive_dir: str=None, train_log_dir: str=None):
    export_metrics(result.rows, out, fmt, build_metadata(cfg))
    logging.getLogger(__name__).info("Metrics written to %s (%d rows)", out, len(result.rows))

    if trajectories is not None:
        save_trajectories(result.runs, trajectories)
    for run in result.runs:
        stem = f"{run.method}-seed{run.seed}"
        if checkpoint_dir is not None:
            os.makedirs(checkpoint_dir, exist_ok=True)
            save_checkpoint(run.final_params, path.join(checkpoint_dir, f"{stem}.upol"))
        if archive_dir is not None and run.meta_state is not None:
            os.makedirs(archive_dir, exist_ok=True)
            archive_save(run.meta_state, path.join(archive_dir, f"{stem}.uarc"))
        if train_log_dir is not None:
            os.makedirs(train_log_dir, exist_ok=True)
            for i, (totals, norms) in enumerate(run.training_logs):
                save_training_log(totals, norms, path.join(train_log_dir, f"{stem}-task{i:03d}.csv"))
