"""
Wall-clock timing of fit and predict phases.
"""
import logging
import time
from typing import Any, Callable, Iterable

import pandas as pd

from oscillatory_dmd.dmd.dispatch import fit_model, predict_trajectory
from oscillatory_dmd.linalg.kernels import DEFAULT_TOL
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)

PHASES = ("fit", "predict")


def timed(function: Callable[..., Any], *args, **kwargs) -> tuple[Any, float]:
    """Calls function and returns its result with the elapsed monotonic time in seconds."""
    start = time.perf_counter()
    result = function(*args, **kwargs)
    return result, time.perf_counter() - start


def bench(snapshots: SnapshotMatrix, methods: Iterable[str], steps: int, tol: float = DEFAULT_TOL,
          phases: Iterable[str] = PHASES, repeats: int = 1, **fit_options) -> pd.DataFrame:
    """
    Times fit and prediction over steps for each method. Each (method, phase) pair is run repeats times
    and the fastest run is kept.

    :param snapshots: Training data; the prediction starts from its first two columns.
    :param methods: Method names as accepted by fit_model.
    :param steps: Prediction horizon.
    :param phases: Subset of ("fit", "predict").
    :return: Frame with columns method, phase, seconds.
    """
    phases = tuple(phases)
    rows = []
    x = snapshots.data
    for method in methods:
        model, fit_seconds = timed(fit_model, snapshots, method, tol, **fit_options)
        for _ in range(repeats - 1):
            fit_seconds = min(fit_seconds, timed(fit_model, snapshots, method, tol, **fit_options)[1])
        if "fit" in phases:
            rows.append({"method": method, "phase": "fit", "seconds": fit_seconds})
        if "predict" in phases:
            seconds = min(timed(predict_trajectory, model, x[:, 0], x[:, 1], steps)[1] for _ in range(repeats))
            rows.append({"method": method, "phase": "predict", "seconds": seconds})
        logger.info(f"Benchmarked {method}: fit {fit_seconds:.4f} s")
    return pd.DataFrame(rows, columns=["method", "phase", "seconds"])
