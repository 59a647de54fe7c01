"""
Prediction quality and conservation metrics.
"""
import logging
from typing import Callable, Optional

import numpy as np

from oscillatory_dmd.diagnostics.dtos.metric_series import MetricSeries
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import as_complex_matrix

logger = logging.getLogger(__name__)

EnergyEvaluator = Callable[[np.ndarray], float]


def _relative_variation(values: np.ndarray, streams: int) -> np.ndarray:
    baseline = values[np.arange(values.shape[0]) % streams]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(values - baseline) / baseline


def metrics(pred, truth, model_energy: Optional[EnergyEvaluator] = None, streams: int = 1) -> MetricSeries:
    """
    err_k = ||pred_k - truth_k|| / ||truth_k||, dM_k = | ||pred_k|| - ||pred_0|| | / ||pred_0||,
    dE_k = | |E(pred_k)| - |E(pred_0)| | / |E(pred_0)| and e_rel = ||pred - truth||_F / ||truth||_F.

    :param pred: n x K predicted states, column k at step k.
    :param truth: n x K reference states.
    :param model_energy: Evaluator of the energy of one state; without it dE is NaN.
    :param streams: 2 measures variations of step k against step k mod 2 (semi-implicit even/odd streams).
    :return: The metric series.
    """
    pred = as_complex_matrix(pred, "pred")
    truth = as_complex_matrix(truth, "truth")
    if pred.shape != truth.shape:
        raise ValidationError(f"pred and truth shapes differ: {pred.shape} vs {truth.shape}")
    if pred.shape[1] == 0:
        raise ValidationError("Metrics need at least one column")
    if streams not in (1, 2):
        raise ValidationError(f"streams must be 1 or 2, got {streams}")

    difference = np.linalg.norm(pred - truth, axis=0)
    truth_norms = np.linalg.norm(truth, axis=0)
    err = np.full(pred.shape[1], np.nan)
    nonzero = truth_norms > 0
    err[nonzero] = difference[nonzero] / truth_norms[nonzero]
    if not np.all(nonzero):
        logger.warning(f"{int((~nonzero).sum())} zero reference column(s); err_k reported as NaN there")

    dm = _relative_variation(np.linalg.norm(pred, axis=0), streams)
    if model_energy is None:
        de = np.full(pred.shape[1], np.nan)
    else:
        energies = np.abs(np.array([model_energy(pred[:, k]) for k in range(pred.shape[1])]))
        de = _relative_variation(energies, streams)

    e_rel = float(np.linalg.norm(pred - truth) / np.linalg.norm(truth))
    return MetricSeries(err=err, dm=dm, de=de, e_rel=e_rel)
