from oscillatory_dmd.dmd.classical import classical_trajectory, fit_classical, predict_classical
from oscillatory_dmd.dmd.dispatch import METHODS, fit_model, predict_trajectory
from oscillatory_dmd.dmd.dtos.models import (
    ClassicalDmdModel,
    DelayEmbedding,
    ModelTag,
    ReducedHermitianModel,
    Scheme,
    UnitaryModel,
)
from oscillatory_dmd.dmd.embedding import delay_embed, unembed
from oscillatory_dmd.dmd.pidmd import fit_pidmd, pidmd_trajectory, predict_pidmd
from oscillatory_dmd.dmd.spectral import principal_log, spectral_factors, stable_power
from oscillatory_dmd.dmd.structured import (
    build_cn_matrices,
    build_si_matrices,
    discretized_energy,
    fit_structured,
    predict_block,
    predict_parallel,
    predict_structured,
)

__all__ = [
    "METHODS",
    "ClassicalDmdModel",
    "DelayEmbedding",
    "ModelTag",
    "ReducedHermitianModel",
    "Scheme",
    "UnitaryModel",
    "build_cn_matrices",
    "build_si_matrices",
    "classical_trajectory",
    "delay_embed",
    "discretized_energy",
    "fit_classical",
    "fit_model",
    "fit_pidmd",
    "fit_structured",
    "pidmd_trajectory",
    "predict_block",
    "predict_classical",
    "predict_parallel",
    "predict_pidmd",
    "predict_structured",
    "predict_trajectory",
    "principal_log",
    "spectral_factors",
    "stable_power",
    "unembed",
]
