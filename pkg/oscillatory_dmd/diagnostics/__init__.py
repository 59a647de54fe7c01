from oscillatory_dmd.diagnostics.bench import bench, timed
from oscillatory_dmd.diagnostics.bounds import (
    apply_reference_operator,
    build_reference_operator,
    check_training_bound,
    prediction_bound_terms,
    reference_energy,
    training_residuals,
)
from oscillatory_dmd.diagnostics.dtos.bound_report import BoundReport
from oscillatory_dmd.diagnostics.dtos.metric_series import MetricSeries
from oscillatory_dmd.diagnostics.dtos.noise_spec import NoiseSpec
from oscillatory_dmd.diagnostics.dtos.toy_spec import ToyFactors, ToySpec
from oscillatory_dmd.diagnostics.energy import energy_evaluator
from oscillatory_dmd.diagnostics.metrics import metrics
from oscillatory_dmd.diagnostics.noise import NOISE_ALGORITHM, add_noise
from oscillatory_dmd.diagnostics.toy import toy_generate

__all__ = [
    "NOISE_ALGORITHM",
    "BoundReport",
    "MetricSeries",
    "NoiseSpec",
    "ToyFactors",
    "ToySpec",
    "add_noise",
    "apply_reference_operator",
    "bench",
    "build_reference_operator",
    "check_training_bound",
    "energy_evaluator",
    "metrics",
    "prediction_bound_terms",
    "reference_energy",
    "timed",
    "toy_generate",
    "training_residuals",
]
