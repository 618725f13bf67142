"""App Tasks"""

# Standard Library
import logging
import time

# Third Party
from celery import group, shared_task

# Django
from django.core.cache import cache

# Local
from . import app_settings
from .simulation import AggregateReport, SimConfig, TrialReport, monte_carlo_sweep, run_trial
from .utils import format_rate, progress_checkpoints

logger = logging.getLogger(__name__)

# Task limits
TRIAL_MAX_RUNTIME_SECONDS = 900  # One trial at K=200 with 100x100-element RISs
SWEEP_LOCK_TIMEOUT = 86400  # Cache lock timeout for a whole campaign


@shared_task(time_limit=TRIAL_MAX_RUNTIME_SECONDS)
def run_trial_task(config_data: dict, trial_index: int) -> dict:
    """
    Run one Monte Carlo trial on a worker.

    Takes and returns plain dicts so the default JSON serializer can carry them.
    """
    config = SimConfig.from_dict(config_data)
    return run_trial(config, trial_index).to_dict()


def _run_in_process(config: SimConfig) -> list[TrialReport]:
    checkpoints = progress_checkpoints(config.trials)
    start_time = time.time()
    reports = []
    for trial_index in range(config.trials):
        report = run_trial(config, trial_index)
        reports.append(report)
        done = trial_index + 1
        if done in checkpoints:
            rates = ", ".join(f"{r.scheme.value} {format_rate(r.sum_rate)}" for r in report.results)
            logger.info(f"[Progress] {done}/{config.trials} trials ({time.time() - start_time:.1f}s), last: {rates}")
    return reports


def _run_on_workers(config: SimConfig) -> list[TrialReport]:
    data = config.to_dict()
    logger.info(f"Dispatching {config.trials} trials to Celery workers")
    result = group(run_trial_task.s(data, i) for i in range(config.trials)).apply_async()
    payloads = result.get(timeout=app_settings.RIS_SIM_CELERY_TIMEOUT)
    # group results come back in signature order, which is trial order
    return [TrialReport.from_dict(payload) for payload in payloads]


def dispatch_trials(config: SimConfig) -> list[TrialReport]:
    """
    Run every trial of one sweep point, ordered by trial index.

    With ``RIS_SIM_USE_CELERY`` the trials fan out as a Celery group,
    otherwise they run here one after another. Either way trial ``i`` is
    seeded with ``config.seed ^ i``, so the reports are identical.
    """
    if app_settings.RIS_SIM_USE_CELERY:
        return _run_on_workers(config)
    return _run_in_process(config)


@shared_task
def run_sweep_task(config_data: dict) -> dict:
    """
    Run a whole campaign in the background and return the per-point means.

    Identical campaigns (same config hash) do not run concurrently.
    """
    from .config import config_hash

    config = SimConfig.from_dict(config_data)
    lock_id = f"risalloc-sweep-{config_hash(config)}"
    if not cache.add(lock_id, True, SWEEP_LOCK_TIMEOUT):
        logger.warning("A campaign with this config is already running. Skipping.")
        return {"status": "already running"}

    try:
        report: AggregateReport = monte_carlo_sweep(config)
    finally:
        cache.delete(lock_id)

    return {
        "status": "done",
        "sweep_axis": report.sweep_axis.value,
        "points": [
            {
                "sweep_value": point.sweep_value,
                "means": {s.scheme.value: s.mean_sum_rate for s in point.summaries},
            }
            for point in report.points
        ],
    }
