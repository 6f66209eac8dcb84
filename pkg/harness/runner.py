# harness/runner.py
"""
Ensemble execution: seeded trajectories on a process pool and streaming aggregation of their
final observables per grid point.
"""

import os
import concurrent.futures
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from configs.experiment_config import HARNESS_SETTINGS
from harness.spec import RunTask
from logger.logger_manager import LoggerManager
from physics.exceptions import IntegrationError, NoiseModelError
from physics.integrator import init_ensemble, make_rng, run_trajectory
from physics.params import derive_params
from physics.records import RunRecord, RunFailure

log = LoggerManager.get_logger()

Outcome = Union[RunRecord, RunFailure]


def resolve_workers(workers: Optional[int] = None) -> int:
    """``workers`` if given, else the environment override, else the configured default."""
    if workers is None:
        raw = os.environ.get(HARNESS_SETTINGS['workers_env_var'])
        if raw is None or not raw.strip():
            return HARNESS_SETTINGS['default_workers']
        try:
            workers = int(raw)
        except ValueError as e:
            raise ValueError(f"{HARNESS_SETTINGS['workers_env_var']}={raw!r} is not an integer.") from e
    if workers < 1:
        raise ValueError(f"Worker count must be at least 1, got {workers}.")
    return int(workers)


def execute_task(task: RunTask) -> Outcome:
    """
    Runs one trajectory. Integration, noise-model and parameter errors become a RunFailure; the
    generator for both the initial state and the noise is stream ``task.index`` of the master seed.
    """
    cfg = task.integrator
    try:
        derived = derive_params(task.params)
        rng = make_rng(cfg.seed, cfg.stream)
        init = init_ensemble(task.init, task.params, rng)
        record = run_trajectory(init, cfg, task.params, derived, rng=rng, init_spec=task.init)
    except (IntegrationError, NoiseModelError, ValueError) as e:
        return RunFailure(index=task.index, point=task.point, seed=cfg.seed, stream=cfg.stream,
                          error=f"{type(e).__name__}: {e}", t=getattr(e, 't', None))
    record.index = task.index
    record.point = dict(task.point)
    return record


def run_tasks(tasks: Sequence[RunTask], workers: Optional[int] = None,
              progress: bool = False) -> Tuple[List[RunRecord], List[RunFailure]]:
    """
    Executes ``tasks`` serially or on a process pool. Results come back ordered by run index, so
    the outcome does not depend on the worker count or on scheduling.
    """
    workers = resolve_workers(workers)
    outcomes: List[Optional[Outcome]] = [None] * len(tasks)
    log.info(f"Running {len(tasks)} trajectories on {workers} worker(s)")

    if workers == 1 or len(tasks) <= 1:
        for i, task in enumerate(tqdm(tasks, desc="Trajectories", disable=not progress)):
            outcomes[i] = execute_task(task)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(execute_task, task): i for i, task in enumerate(tasks)}
            for future in tqdm(concurrent.futures.as_completed(futures), total=len(futures),
                               desc="Trajectories", disable=not progress):
                i = futures[future]
                try:
                    outcomes[i] = future.result()
                except Exception as e:
                    task = tasks[i]
                    outcomes[i] = RunFailure(index=task.index, point=task.point, seed=task.integrator.seed,
                                             stream=task.integrator.stream, error=f"{type(e).__name__}: {e}")

    records = [o for o in outcomes if isinstance(o, RunRecord)]
    failures = [o for o in outcomes if isinstance(o, RunFailure)]
    for failure in failures:
        log.warning(f"Run {failure.index} at {failure.point} failed: {failure.error}")
    return records, failures


class StreamingMoments:
    """
    Welford running mean and variance per named quantity. NaN values are skipped per quantity.
    """

    def __init__(self):
        self._count: Dict[str, int] = {}
        self._mean: Dict[str, float] = {}
        self._m2: Dict[str, float] = {}

    def update(self, values: Dict[str, float]) -> None:
        for name, value in values.items():
            value = float(value)
            if math.isnan(value):
                self._count.setdefault(name, 0)
                self._mean.setdefault(name, float('nan'))
                self._m2.setdefault(name, 0.0)
                continue
            count = self._count.get(name, 0) + 1
            mean = self._mean.get(name, float('nan'))
            mean = 0.0 if count == 1 else mean
            delta = value - mean
            mean += delta / count
            self._m2[name] = self._m2.get(name, 0.0) + delta * (value - mean)
            self._count[name] = count
            self._mean[name] = mean

    def count(self, name: str) -> int:
        return self._count.get(name, 0)

    def mean(self, name: str) -> float:
        return self._mean.get(name, float('nan')) if self.count(name) else float('nan')

    def variance(self, name: str) -> float:
        count = self.count(name)
        return self._m2[name] / (count - 1) if count > 1 else float('nan')

    def sem(self, name: str) -> float:
        count = self.count(name)
        return math.sqrt(self.variance(name) / count) if count > 1 else float('nan')

    @property
    def names(self) -> List[str]:
        return list(self._count)


def final_values(record: RunRecord) -> Dict[str, float]:
    summary = record.final_summary()
    summary.pop('alpha_re', None)
    summary.pop('alpha_im', None)
    summary.pop('n_atoms', None)
    summary['alpha_abs'] = abs(record.final_state.alpha)
    return summary


def aggregate(records: Iterable[RunRecord], failures: Iterable[RunFailure] = ()) -> pd.DataFrame:
    """
    Ensemble mean and standard error of every final observable per grid point, one row per point
    in the order the points first appear. Records are folded in run-index order.
    """
    moments: Dict[Tuple, StreamingMoments] = {}
    points: Dict[Tuple, Dict] = {}
    failed: Dict[Tuple, int] = {}

    def key_of(point: Dict) -> Tuple:
        return tuple(sorted((k, str(v)) for k, v in point.items()))

    for record in sorted(records, key=lambda r: r.index):
        key = key_of(record.point)
        points.setdefault(key, record.point)
        moments.setdefault(key, StreamingMoments()).update(final_values(record))
    for failure in failures:
        key = key_of(failure.point)
        points.setdefault(key, failure.point)
        failed[key] = failed.get(key, 0) + 1

    rows = []
    for key, point in points.items():
        row = dict(point)
        stats = moments.get(key, StreamingMoments())
        row['n_runs'] = max([stats.count(name) for name in stats.names] or [0])
        row['n_failed'] = failed.get(key, 0)
        for name in stats.names:
            row[f'mean_{name}'] = stats.mean(name)
            row[f'sem_{name}'] = stats.sem(name)
        rows.append(row)
    return pd.DataFrame(rows)


def batch_mean(records: Iterable[RunRecord], name: str) -> float:
    values = np.array([final_values(r)[name] for r in records], dtype=float)
    return float(np.nanmean(values)) if values.size else float('nan')
