"""In-process ensembles: run N independent seeds and aggregate their metrics.

The networked stack does the same job across worker processes; this module
is the direct route used by analysis code and the statistical test suite.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .hysteresis import run_hysteresis
from .params import SimulationParams

METRIC_NAMES = ("exchange_bias", "coercivity", "h_cross_desc", "h_cross_asc")


def mean_stderr(values) -> tuple[float, float]:
    """Sample mean and standard error (ddof=1 std / sqrt(N); 0 when N == 1)."""
    arr = np.asarray(values, dtype=np.float64)
    n = len(arr)
    mean = float(arr.mean())
    if n < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / np.sqrt(n))


@dataclass
class EnsembleResult:
    """Per-run metric rows plus their column means and standard errors."""

    metrics: np.ndarray  # shape (n_runs, 4), columns as METRIC_NAMES
    means: np.ndarray
    stderrs: np.ndarray

    @property
    def n_runs(self) -> int:
        return self.metrics.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.metrics[:, METRIC_NAMES.index(name)]


def _run_one(params: SimulationParams):
    _, metrics = run_hysteresis(params)
    return metrics.as_vector()


def run_ensemble(
    base: SimulationParams,
    n_runs: int,
    master_seed: int,
    workers: int | None = None,
) -> EnsembleResult:
    """Run `n_runs` seeds derived from master_seed and aggregate the metrics.

    Member i runs with seed derive_run_seed(master_seed, i), so any prefix of
    an ensemble is itself the ensemble with fewer repetitions.  `workers`
    fans the runs out over processes; None keeps everything in-process.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    runs = [base.with_run(master_seed, i) for i in range(n_runs)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_one, runs, chunksize=max(1, n_runs // (4 * workers))))
    else:
        rows = [_run_one(p) for p in runs]
    metrics = np.array(rows, dtype=np.float64)
    stats = [mean_stderr(metrics[:, k]) for k in range(metrics.shape[1])]
    return EnsembleResult(
        metrics=metrics,
        means=np.array([s[0] for s in stats]),
        stderrs=np.array([s[1] for s in stats]),
    )
