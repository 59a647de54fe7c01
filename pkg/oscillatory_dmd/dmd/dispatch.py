"""
Uniform fit / trajectory entry points over the four DMD variants, keyed by method name.
"""
from typing import Optional, Union

import numpy as np

from oscillatory_dmd.dmd.classical import classical_trajectory, fit_classical
from oscillatory_dmd.dmd.dtos.models import ClassicalDmdModel, ReducedHermitianModel, Scheme, UnitaryModel
from oscillatory_dmd.dmd.pidmd import PIDMD_WARN_DIM, fit_pidmd, pidmd_trajectory
from oscillatory_dmd.dmd.structured import fit_structured, structured_trajectory
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import DEFAULT_TOL
from oscillatory_dmd.procrustes.solvers import DEFAULT_RANK_RTOL
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

METHODS = ("cn", "si", "classical", "pidmd")

DmdModel = Union[ClassicalDmdModel, UnitaryModel, ReducedHermitianModel]


def fit_model(snapshots: SnapshotMatrix, method: str, tol: float = DEFAULT_TOL,
              rank_rtol: float = DEFAULT_RANK_RTOL, pidmd_warn_dim: int = PIDMD_WARN_DIM) -> DmdModel:
    match method:
        case "cn":
            return fit_structured(snapshots, Scheme.CN, tol)
        case "si":
            return fit_structured(snapshots, Scheme.SI, tol)
        case "classical":
            return fit_classical(snapshots, tol)
        case "pidmd":
            return fit_pidmd(snapshots, rank_rtol, pidmd_warn_dim)
    raise ValidationError(f"Unknown DMD method '{method}', expected one of {METHODS}")


def method_name(model: DmdModel) -> str:
    if isinstance(model, ReducedHermitianModel):
        return model.scheme.value
    return "classical" if isinstance(model, ClassicalDmdModel) else "pidmd"


def predict_trajectory(model: DmdModel, x0, x1=None, steps: int = 0, mode: str = "block",
                       num_threads: Optional[int] = None) -> np.ndarray:
    """
    Predicted states x_0..x_N for any model type (N + 1 columns).
    x1 is used by SI models only; the mode applies to CN/SI models, the others have a single path.
    """
    if isinstance(model, ReducedHermitianModel):
        return structured_trajectory(model, x0, x1, steps, mode, num_threads)
    if isinstance(model, ClassicalDmdModel):
        return classical_trajectory(model, steps, x0)
    return pidmd_trajectory(model, x0, steps)
